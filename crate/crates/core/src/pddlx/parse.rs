//! Domain and problem readers.

use std::collections::{HashMap, HashSet};

use super::ast::*;
use super::error::{ParseError, Result, Span};
use super::lexer::{decode, end_span, parse_number, read_all, SExpr};
use super::syntax::{expect_atom, expect_list, expect_name, typed_list, Scope, BUILTIN_PREDICATES};

fn err(span: Span, msg: impl Into<String>) -> ParseError {
    ParseError::syntax(span, msg)
}

fn sem(span: Span, msg: impl Into<String>) -> ParseError {
    ParseError::semantic(span, msg)
}

/// Splits `(define (kind name) sections...)`.
fn define<'a>(src: &str, top: &'a [SExpr], kind: &str) -> Result<(&'a str, &'a [SExpr])> {
    let first = match top {
        [] => return Err(err(end_span(src), format!("expected (define ({kind} ...))"))),
        [one] => one,
        [_, extra, ..] => return Err(err(extra.span(), "text after the define form")),
    };
    let items = expect_list(first, "define")?;
    if first.head() != Some("define") {
        return Err(err(first.span(), "expected define"));
    }
    let header = items.get(1).ok_or_else(|| err(first.span(), format!("missing ({kind} name)")))?;
    let h = expect_list(header, "header")?;
    if header.head() != Some(kind) || h.len() != 2 {
        return Err(err(header.span(), format!("expected ({kind} name)")));
    }
    Ok((expect_name(&h[1], "name")?, &items[2..]))
}

fn section_keyword(e: &SExpr) -> Result<&str> {
    let k = e.head().ok_or_else(|| err(e.span(), "expected a section"))?;
    if !k.starts_with(':') {
        return Err(err(e.span(), format!("expected a section keyword, found {k}")));
    }
    Ok(k)
}

pub fn parse_domain(text: &str) -> Result<DomainDef> {
    let top = read_all(text)?;
    let (name, sections) = define(text, &top, "domain")?;
    let mut dom = DomainDef {
        name: name.to_string(),
        requirements: Vec::new(),
        types: Vec::new(),
        predicates: Vec::new(),
        functions: Vec::new(),
        actions: Vec::new(),
        events: Vec::new(),
    };
    // declarations first so schema sections may appear in any order
    let mut schemas = Vec::new();
    let mut seen = HashSet::new();
    for sec in sections {
        let kw = section_keyword(sec)?;
        let body = &sec.as_list().unwrap_or(&[])[1..];
        if matches!(kw, ":requirements" | ":types" | ":predicates" | ":functions") && !seen.insert(kw) {
            return Err(err(sec.span(), format!("duplicate {kw} section")));
        }
        match kw {
            ":requirements" => {
                for r in body {
                    dom.requirements.push(expect_atom(r, "requirement")?.to_string());
                }
            }
            ":types" => read_types(&mut dom, body)?,
            ":predicates" => {
                for p in body {
                    let decl = read_decl(&dom, p, "predicate")?;
                    if BUILTIN_PREDICATES.contains(&decl.0.as_str()) {
                        return Err(sem(p.span(), format!("{} is a built-in predicate", decl.0)));
                    }
                    if dom.predicate(&decl.0).is_some() {
                        return Err(sem(p.span(), format!("duplicate predicate {}", decl.0)));
                    }
                    dom.predicates.push(PredicateDecl { name: decl.0, params: decl.1 });
                }
            }
            ":functions" => {
                let mut i = 0;
                while i < body.len() {
                    let f = &body[i];
                    i += 1;
                    let decl = read_decl(&dom, f, "function")?;
                    if dom.function(&decl.0).is_some() {
                        return Err(sem(f.span(), format!("duplicate function {}", decl.0)));
                    }
                    dom.functions.push(FunctionDecl { name: decl.0, params: decl.1 });
                    // optional `- number` result type
                    if body.get(i).and_then(SExpr::as_atom) == Some("-") {
                        match body.get(i + 1).and_then(SExpr::as_atom) {
                            Some("number") => i += 2,
                            _ => return Err(err(body[i].span(), "functions must have type number")),
                        }
                    }
                }
            }
            ":action" | ":event" => schemas.push(sec),
            other => return Err(err(sec.span(), format!("unsupported section {other}"))),
        }
    }
    let mut names = HashSet::new();
    for sec in schemas {
        let list = expect_list(sec, "schema")?;
        let name_e = list.get(1).ok_or_else(|| err(sec.span(), "missing schema name"))?;
        let name = expect_name(name_e, "schema name")?;
        if !names.insert(name.to_string()) {
            return Err(sem(name_e.span(), format!("duplicate action or event name {name}")));
        }
        if sec.head() == Some(":action") {
            let a = read_action(&dom, name, &list[2..], sec.span())?;
            dom.actions.push(a);
        } else {
            let e = read_event(&dom, name, &list[2..], sec.span())?;
            dom.events.push(e);
        }
    }
    Ok(dom)
}

pub fn parse_domain_bytes(bytes: &[u8]) -> Result<DomainDef> {
    parse_domain(decode(bytes)?)
}

fn read_types(dom: &mut DomainDef, body: &[SExpr]) -> Result<()> {
    let entries = typed_list(body)?;
    for (name, parent, span) in &entries {
        if name.starts_with('?') || name == "object" || name == "real" {
            return Err(sem(*span, format!("invalid type name {name}")));
        }
        if dom.types.iter().any(|t| &t.name == name) {
            return Err(sem(*span, format!("duplicate type {name}")));
        }
        dom.types.push(TypeDecl { name: name.clone(), parent: parent.clone() });
    }
    for (name, parent, span) in &entries {
        if parent != "object" && !dom.types.iter().any(|t| &t.name == parent) {
            return Err(sem(*span, format!("undeclared parent type {parent} of {name}")));
        }
    }
    // reject cycles
    for t in &dom.types {
        if !dom.is_subtype(&t.name, "object") {
            return Err(sem(Span::default(), format!("cyclic type hierarchy at {}", t.name)));
        }
    }
    Ok(())
}

fn check_type(dom: &DomainDef, ty: &str, span: Span) -> Result<()> {
    if ty == "object" || dom.types.iter().any(|t| t.name == ty) {
        Ok(())
    } else {
        Err(sem(span, format!("undeclared type {ty}")))
    }
}

fn read_decl(dom: &DomainDef, e: &SExpr, what: &str) -> Result<(String, Vec<TypedVar>)> {
    let items = expect_list(e, what)?;
    let head = items.first().ok_or_else(|| err(e.span(), format!("empty {what}")))?;
    let name = expect_name(head, &format!("{what} name"))?;
    let mut params = Vec::new();
    for (v, ty, span) in typed_list(&items[1..])? {
        if !v.starts_with('?') {
            return Err(err(span, format!("expected ?variable, found {v}")));
        }
        check_type(dom, &ty, span)?;
        params.push(TypedVar { name: v, ty });
    }
    Ok((name.to_string(), params))
}

struct SchemaParts<'a> {
    params: Option<&'a SExpr>,
    pre: Option<&'a SExpr>,
    eff: Option<&'a SExpr>,
}

fn schema_parts<'a>(rest: &'a [SExpr], span: Span) -> Result<SchemaParts<'a>> {
    let mut parts = SchemaParts { params: None, pre: None, eff: None };
    if rest.len() % 2 != 0 {
        return Err(err(span, "schema keywords must be followed by a value"));
    }
    for pair in rest.chunks(2) {
        let kw = expect_atom(&pair[0], "schema keyword")?;
        let slot = match kw {
            ":parameters" => &mut parts.params,
            ":precondition" => &mut parts.pre,
            ":effect" => &mut parts.eff,
            _ => return Err(err(pair[0].span(), format!("unknown schema keyword {kw}"))),
        };
        if slot.is_some() {
            return Err(err(pair[0].span(), format!("duplicate {kw}")));
        }
        *slot = Some(&pair[1]);
    }
    Ok(parts)
}

fn read_params(dom: &DomainDef, e: Option<&SExpr>) -> Result<(Vec<TypedVar>, Vec<String>)> {
    let mut objs = Vec::new();
    let mut reals = Vec::new();
    let Some(e) = e else {
        return Ok((objs, reals));
    };
    let mut seen = HashSet::new();
    for (v, ty, span) in typed_list(expect_list(e, "parameters")?)? {
        if !v.starts_with('?') || v.len() < 2 {
            return Err(err(span, format!("expected ?variable, found {v}")));
        }
        if !seen.insert(v.clone()) {
            return Err(sem(span, format!("duplicate parameter {v}")));
        }
        if ty == "real" {
            reals.push(v[1..].to_string());
        } else {
            check_type(dom, &ty, span)?;
            objs.push(TypedVar { name: v, ty });
        }
    }
    Ok((objs, reals))
}

fn scope<'a>(dom: &'a DomainDef, objs: &[TypedVar], reals: &[String]) -> Scope<'a> {
    Scope {
        domain: dom,
        vars: objs.iter().map(|v| (v.name.clone(), v.ty.clone())).collect(),
        numeric: reals.to_vec(),
        objects: None,
        regions: None,
    }
}

fn read_action(dom: &DomainDef, name: &str, rest: &[SExpr], span: Span) -> Result<ActionSchema> {
    let parts = schema_parts(rest, span)?;
    let (object_params, numeric_params) = read_params(dom, parts.params)?;
    let sc = scope(dom, &object_params, &numeric_params);
    let mut precondition = Vec::new();
    if let Some(p) = parts.pre {
        sc.conditions(p, &mut precondition)?;
    }
    let (mut eff_plus, mut eff_minus, mut eff_numeric) = (Vec::new(), Vec::new(), Vec::new());
    if let Some(e) = parts.eff {
        sc.effects(e, &mut eff_plus, &mut eff_minus, &mut eff_numeric)?;
    }
    Ok(ActionSchema {
        name: name.to_string(),
        object_params,
        numeric_params,
        precondition,
        eff_plus,
        eff_minus,
        eff_numeric,
    })
}

fn read_event(dom: &DomainDef, name: &str, rest: &[SExpr], span: Span) -> Result<EventSchema> {
    let parts = schema_parts(rest, span)?;
    let (object_params, reals) = read_params(dom, parts.params)?;
    if !reals.is_empty() {
        return Err(sem(span, format!("event {name} cannot take real parameters")));
    }
    let sc = scope(dom, &object_params, &[]);
    let mut precondition = Vec::new();
    if let Some(p) = parts.pre {
        sc.conditions(p, &mut precondition)?;
    }
    let (mut eff_plus, mut eff_minus, mut numeric) = (Vec::new(), Vec::new(), Vec::new());
    if let Some(e) = parts.eff {
        sc.effects(e, &mut eff_plus, &mut eff_minus, &mut numeric)?;
    }
    if !numeric.is_empty() {
        return Err(sem(span, format!("event {name} has numeric effects, which events do not support")));
    }
    Ok(EventSchema { name: name.to_string(), object_params, precondition, eff_plus, eff_minus })
}

pub fn parse_problem(text: &str, dom: &DomainDef) -> Result<ProblemDef> {
    let top = read_all(text)?;
    let (name, sections) = define(text, &top, "problem")?;
    let mut prob = ProblemDef {
        name: name.to_string(),
        domain: String::new(),
        objects: Vec::new(),
        init_props: Vec::new(),
        init_fluents: Vec::new(),
        goal: Vec::new(),
        regions: Vec::new(),
        obstacles: Vec::new(),
        objectives: Vec::new(),
        bounds: Vec::new(),
        metric: None,
    };
    let mut by_kw: HashMap<&str, &SExpr> = HashMap::new();
    for sec in sections {
        let kw = section_keyword(sec)?;
        if !matches!(
            kw,
            ":domain" | ":requirements" | ":objects" | ":init" | ":goal" | ":regions" | ":parameters-bounds" | ":metric"
        ) {
            return Err(err(sec.span(), format!("unsupported section {kw}")));
        }
        if by_kw.insert(kw, sec).is_some() {
            return Err(err(sec.span(), format!("duplicate {kw} section")));
        }
    }
    let body = |kw: &str| by_kw.get(kw).map(|s| &s.as_list().unwrap_or(&[])[1..]);

    let dsec = by_kw.get(":domain").ok_or_else(|| err(end_span(text), "missing (:domain name)"))?;
    match body(":domain") {
        Some([d]) => prob.domain = expect_name(d, "domain name")?.to_string(),
        _ => return Err(err(dsec.span(), "expected (:domain name)")),
    }
    if prob.domain != dom.name {
        return Err(sem(dsec.span(), format!("problem is for domain {}, not {}", prob.domain, dom.name)));
    }

    let mut objects: HashMap<String, String> = HashMap::new();
    if let Some(items) = body(":objects") {
        for (o, ty, span) in typed_list(items)? {
            if o.starts_with('?') {
                return Err(err(span, format!("invalid object name {o}")));
            }
            check_type(dom, &ty, span)?;
            if objects.insert(o.clone(), ty.clone()).is_some() {
                return Err(sem(span, format!("duplicate object {o}")));
            }
            prob.objects.push(TypedObject { name: o, ty });
        }
    }

    let mut region_names = Vec::new();
    if let Some(items) = body(":regions") {
        read_regions(&mut prob, items, &mut region_names)?;
    }

    let sc = Scope {
        domain: dom,
        vars: HashMap::new(),
        numeric: Vec::new(),
        objects: Some(&objects),
        regions: Some(&region_names),
    };

    if let Some(items) = body(":init") {
        for it in items {
            if it.head() == Some("=") {
                let l = expect_list(it, "assignment")?;
                if l.len() != 3 {
                    return Err(err(it.span(), "expected (= fluent value)"));
                }
                let f = sc.fluent(&l[1])?;
                let v = l[2]
                    .as_atom()
                    .and_then(parse_number)
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| err(l[2].span(), "expected a finite number"))?;
                let g = GroundFluent { name: f.name, args: f.args.iter().map(|t| t.name().to_string()).collect() };
                if prob.init_fluents.iter().any(|(h, _)| h == &g) {
                    return Err(sem(it.span(), format!("fluent {} assigned twice", g.name)));
                }
                prob.init_fluents.push((g, v));
            } else {
                let a = sc.atom(it)?;
                if BUILTIN_PREDICATES.contains(&a.predicate.as_str()) {
                    return Err(sem(it.span(), format!("{} flags belong in :regions", a.predicate)));
                }
                let g = GroundAtom { predicate: a.predicate, args: a.args.iter().map(|t| t.name().to_string()).collect() };
                if !prob.init_props.contains(&g) {
                    prob.init_props.push(g);
                }
            }
        }
    }

    if let Some(items) = body(":goal") {
        match items {
            [g] => sc.conditions(g, &mut prob.goal)?,
            _ => return Err(err(by_kw[":goal"].span(), "expected one goal condition")),
        }
        for c in &prob.goal {
            check_goal_fluents(&prob, c, by_kw[":goal"].span())?;
        }
    }

    read_bounds(&mut prob, dom, body(":parameters-bounds").unwrap_or(&[]))?;

    if let Some(items) = body(":metric") {
        let span = by_kw[":metric"].span();
        let [sense, e] = items else {
            return Err(err(span, "expected (:metric minimize expr)"));
        };
        let sense = match expect_atom(sense, "metric sense")? {
            "minimize" => MetricSense::Minimize,
            "maximize" => MetricSense::Maximize,
            s => return Err(err(sense.span(), format!("unknown metric sense {s}"))),
        };
        prob.metric = Some(Metric { sense, expr: sc.expr(e)? });
    }
    Ok(prob)
}

pub fn parse_problem_bytes(bytes: &[u8], dom: &DomainDef) -> Result<ProblemDef> {
    parse_problem(decode(bytes)?, dom)
}

fn check_goal_fluents(prob: &ProblemDef, c: &Condition, span: Span) -> Result<()> {
    let ground = |f: &FluentRef| GroundFluent { name: f.name.clone(), args: f.args.iter().map(|t| t.name().to_string()).collect() };
    let mut missing = None;
    match c {
        Condition::NumericInterval(n) => n.expr.visit(&mut |e| {
            if let Expr::Fluent(f) = e {
                if prob.fluent_value(&ground(f)).is_none() {
                    missing = Some(f.name.clone());
                }
            }
        }),
        Condition::RegionMembership { x, y, .. } => {
            for f in [x, y] {
                if prob.fluent_value(&ground(f)).is_none() {
                    missing = Some(f.name.clone());
                }
            }
        }
        _ => {}
    }
    match missing {
        Some(f) => Err(sem(span, format!("goal fluent {f} has no initial value"))),
        None => Ok(()),
    }
}

fn number(e: &SExpr) -> Result<f64> {
    e.as_atom()
        .and_then(parse_number)
        .ok_or_else(|| err(e.span(), "expected a number"))
}

fn read_regions(prob: &mut ProblemDef, items: &[SExpr], names: &mut Vec<String>) -> Result<()> {
    let mut flags = Vec::new();
    for it in items {
        let l = expect_list(it, "region")?;
        let kind = it.head().ok_or_else(|| err(it.span(), "expected region form"))?;
        match kind {
            "rect" | "poly" => {
                let name = expect_name(l.get(1).ok_or_else(|| err(it.span(), "missing region name"))?, "region name")?;
                if names.iter().any(|n| n == name) {
                    return Err(sem(it.span(), format!("duplicate region {name}")));
                }
                let nums = l[2..].iter().map(number).collect::<Result<Vec<f64>>>()?;
                if nums.iter().any(|v| !v.is_finite()) {
                    return Err(sem(it.span(), "region coordinates must be finite"));
                }
                let shape = if kind == "rect" {
                    let [x1, y1, x2, y2] = nums[..] else {
                        return Err(err(it.span(), "rect takes name x1 y1 x2 y2"));
                    };
                    if !(x1 < x2 && y1 < y2) {
                        return Err(sem(it.span(), format!("rect {name} must have x1 < x2 and y1 < y2")));
                    }
                    RegionShape::Rect { x1, y1, x2, y2 }
                } else {
                    if nums.len() < 6 || nums.len() % 2 != 0 {
                        return Err(err(it.span(), "poly takes name and at least three x y pairs"));
                    }
                    let pts: Vec<(f64, f64)> = nums.chunks(2).map(|c| (c[0], c[1])).collect();
                    if let Err(e) = crate::geometry::Region::polygon(name, &pts) {
                        return Err(sem(it.span(), format!("region {name}: {e}")));
                    }
                    RegionShape::Polygon(pts)
                };
                names.push(name.to_string());
                prob.regions.push(RegionDecl { name: name.to_string(), shape });
            }
            "obstacle" | "objective" => flags.push(it),
            other => return Err(err(it.span(), format!("unknown region form {other}"))),
        }
    }
    for it in flags {
        let l = expect_list(it, "flag")?;
        let [_, n] = l else {
            return Err(err(it.span(), "region flag takes one region name"));
        };
        let n = expect_name(n, "region name")?;
        if !names.iter().any(|r| r == n) {
            return Err(sem(it.span(), format!("undeclared region {n}")));
        }
        let list = if it.head() == Some("obstacle") { &mut prob.obstacles } else { &mut prob.objectives };
        if !list.iter().any(|r| r == n) {
            list.push(n.to_string());
        }
    }
    Ok(())
}

fn read_bounds(prob: &mut ProblemDef, dom: &DomainDef, items: &[SExpr]) -> Result<()> {
    let slots = dom.numeric_slots();
    let mut bounds: Vec<ParamBound> = slots
        .iter()
        .map(|s| ParamBound { slot: s.clone(), lower: f64::NEG_INFINITY, upper: f64::INFINITY })
        .collect();
    for it in items {
        let l = expect_list(it, "bound")?;
        let op = it.head().ok_or_else(|| err(it.span(), "expected bound"))?;
        let args = &l[1..];
        let slot_of = |e: &SExpr| -> Result<usize> {
            let a = expect_atom(e, "?slot")?;
            let name = a
                .strip_prefix('?')
                .ok_or_else(|| err(e.span(), format!("expected ?slot, found {a}")))?;
            slots
                .iter()
                .position(|s| s == name)
                .ok_or_else(|| sem(e.span(), format!("unknown numeric parameter {a}")))
        };
        let is_slot = |e: &SExpr| e.as_atom().is_some_and(|a| a.starts_with('?'));
        let (k, lo, hi) = match (op, args.len()) {
            ("<=", 3) => (slot_of(&args[1])?, Some(number(&args[0])?), Some(number(&args[2])?)),
            ("=", 2) => {
                let v = number(&args[1])?;
                (slot_of(&args[0])?, Some(v), Some(v))
            }
            ("<=", 2) | (">=", 2) => {
                let (s, v, slot_left) = if is_slot(&args[0]) {
                    (slot_of(&args[0])?, number(&args[1])?, true)
                } else {
                    (slot_of(&args[1])?, number(&args[0])?, false)
                };
                if (op == "<=") == slot_left {
                    (s, None, Some(v))
                } else {
                    (s, Some(v), None)
                }
            }
            _ => return Err(err(it.span(), "expected (<= lo ?p hi), (<= ?p hi), (>= ?p lo) or (= ?p v)")),
        };
        if let Some(lo) = lo {
            bounds[k].lower = lo;
        }
        if let Some(hi) = hi {
            bounds[k].upper = hi;
        }
        if bounds[k].lower > bounds[k].upper {
            return Err(ParseError::Bounds {
                span: it.span(),
                msg: format!("lower bound {} exceeds upper bound {} for ?{}", bounds[k].lower, bounds[k].upper, slots[k]),
            });
        }
    }
    prob.bounds = bounds;
    Ok(())
}
