use mxplan::corpus;
use mxplan::pddlx::*;
use proptest::prelude::*;

#[test]
fn corpus_counts() {
    let counts = |e: corpus::Entry| {
        let d = parse_domain(e.domain).unwrap();
        (d.types.len(), d.predicates.len(), d.actions.len())
    };
    assert_eq!(counts(corpus::AUV), (2, 2, 2));
    assert_eq!(counts(corpus::TAXI), (3, 2, 3));
    assert_eq!(counts(corpus::ROVER), (7, 22, 9));
}

#[test]
fn corpus_round_trips() {
    for e in corpus::ALL {
        let d = parse_domain(e.domain).unwrap();
        let d2 = parse_domain(&print_domain(&d)).unwrap();
        assert_eq!(d, d2, "{}", e.name);
        let p = parse_problem(e.problem, &d).unwrap();
        let text = print_problem(&p);
        let p2 = parse_problem(&text, &d).unwrap();
        assert_eq!(p, p2, "{}", e.name);
        // printing is a fixed point after one pass
        assert_eq!(print_problem(&p2), text);
    }
}

#[test]
fn auv_bounds_and_obstacle() {
    let (_, p) = corpus::AUV.parse().unwrap();
    let b: Vec<(String, f64, f64)> = p.bounds.iter().map(|b| (b.slot.clone(), b.lower, b.upper)).collect();
    assert_eq!(
        b,
        vec![
            ("vel_x".to_string(), -10.0, 10.0),
            ("vel_y".to_string(), -10.0, 10.0),
            ("duration".to_string(), 0.0, 1.0)
        ]
    );
    let o1 = p.regions.iter().find(|r| r.name == "O1").unwrap();
    assert_eq!(o1.shape, RegionShape::Rect { x1: 40.0, y1: 30.0, x2: 50.0, y2: 40.0 });
    assert_eq!(p.obstacles, vec!["O1".to_string()]);
}

#[test]
fn missing_bounds_default_to_infinite() {
    let d = parse_domain(corpus::AUV.domain).unwrap();
    let src = "(define (problem p) (:domain auv) (:objects v0 - vehicle)
        (:init (= (location-x v0) 0) (= (location-y v0) 0)) (:goal (and)))";
    let p = parse_problem(src, &d).unwrap();
    assert_eq!(p.bounds.len(), 3);
    assert!(p.bounds.iter().all(|b| b.lower == f64::NEG_INFINITY && b.upper == f64::INFINITY));
    assert!(print_problem(&p).contains("(:goal (and))"));
}

#[test]
fn empty_predicates_is_semantic_error() {
    let src = "(define (domain d) (:predicates) (:action a :parameters () :precondition (and (p)) :effect (and)))";
    match parse_domain(src) {
        Err(ParseError::Semantic { msg, .. }) => assert!(msg.contains("undeclared predicate")),
        other => panic!("{other:?}"),
    }
}

#[test]
fn undeclared_object_fluent() {
    let d = parse_domain(corpus::AUV.domain).unwrap();
    let src = "(define (problem p) (:domain auv) (:objects v0 - vehicle)
        (:init (= (location-x v9) 0)) (:goal (and)))";
    match parse_problem(src, &d) {
        Err(ParseError::Semantic { msg, span }) => {
            assert!(msg.contains("undeclared object v9"));
            assert_eq!(span.line, 2);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn inverted_bounds() {
    let d = parse_domain(corpus::AUV.domain).unwrap();
    let src = "(define (problem p) (:domain auv) (:objects v0 - vehicle)
        (:init (= (location-x v0) 0) (= (location-y v0) 0)) (:goal (and))
        (:parameters-bounds (<= 3 ?duration 1)))";
    assert!(matches!(parse_problem(src, &d), Err(ParseError::Bounds { .. })));
}

#[test]
fn duplicate_schema_names() {
    let src = "(define (domain d) (:predicates (p))
        (:action a :effect (p)) (:event a :precondition (p) :effect (not (p))))";
    assert!(matches!(parse_domain(src), Err(ParseError::Semantic { .. })));
}

#[test]
fn arity_mismatch() {
    let src = "(define (domain d) (:types t) (:predicates (p ?x - t))
        (:action a :parameters (?x - t) :effect (p ?x ?x)))";
    assert!(matches!(parse_domain(src), Err(ParseError::Semantic { .. })));
}

#[test]
fn event_with_numeric_effect_rejected() {
    let src = "(define (domain d) (:functions (f)) (:event e :effect (increase (f) 1)))";
    assert!(matches!(parse_domain(src), Err(ParseError::Semantic { .. })));
}

#[test]
fn comparisons_normalise() {
    let src = "(define (domain d) (:functions (f) (g))
        (:action a :parameters (?k - real)
          :precondition (and (>= (f) 2) (< (f) 5) (<= (f) (g)) (= (f) 1))
          :effect (and (increase (f) (/ (^ ?k 2) (sqrt (- (g))))))))";
    let d = parse_domain(src).unwrap();
    let pre = &d.actions[0].precondition;
    let iv = |c: &Condition| match c {
        Condition::NumericInterval(n) => (n.lower, n.upper, n.closed),
        _ => panic!(),
    };
    assert_eq!(iv(&pre[0]), (2.0, f64::INFINITY, true));
    assert_eq!(iv(&pre[1]), (f64::NEG_INFINITY, 5.0, false));
    assert_eq!(iv(&pre[2]), (f64::NEG_INFINITY, 0.0, true));
    assert_eq!(iv(&pre[3]), (1.0, 1.0, true));
    assert_eq!(parse_domain(&print_domain(&d)).unwrap(), d);
}

#[test]
fn json_like_garbage_is_lex_error() {
    assert!(matches!(parse_domain("{\"a\": 1}"), Err(ParseError::Lex { .. })));
    assert!(matches!(parse_domain_bytes(&[b'(', 0xff, 0xfe]), Err(ParseError::Lex { .. })));
}

fn check_span(src: &str, e: &ParseError) {
    let s = e.span();
    let lines = src.split('\n').count();
    assert!(s.line >= 1 && s.line <= lines, "line {} of {lines}", s.line);
    assert!(s.offset <= src.len());
}

proptest! {
    #[test]
    fn parser_total_on_bytes(bytes in proptest::collection::vec(any::<u8>(), 0..200)) {
        if let Err(e) = parse_domain_bytes(&bytes) {
            let valid = std::str::from_utf8(&bytes).map(|s| s.to_string())
                .unwrap_or_else(|e| String::from_utf8_lossy(&bytes[..e.valid_up_to()]).into_owned());
            check_span(&valid, &e);
        }
    }

    #[test]
    fn parser_total_on_mutated_corpus(cut in 0usize..2000, junk in "[()a-z?: -]{0,8}") {
        let src = corpus::TAXI.domain;
        let cut = cut.min(src.len());
        let cut = (0..=cut).rev().find(|&i| src.is_char_boundary(i)).unwrap();
        let text = format!("{}{}{}", &src[..cut], junk, &src[cut..]);
        if let Err(e) = parse_domain(&text) {
            check_span(&text, &e);
        }
        let d = parse_domain(corpus::TAXI.domain).unwrap();
        let ptext = format!("{}{}", &corpus::TAXI.problem[..cut.min(corpus::TAXI.problem.len())], junk);
        if let Err(e) = parse_problem(&ptext, &d) {
            check_span(&ptext, &e);
        }
    }
}
