//! Canonical printer. Output re-parses to a structurally equal tree.

use std::fmt::{self, Write};

use super::ast::*;

fn num(v: f64) -> String {
    format!("{v}")
}

fn term(t: &Term) -> &str {
    t.name()
}

fn args<T: AsRef<str>>(items: impl IntoIterator<Item = T>) -> String {
    let mut s = String::new();
    for a in items {
        s.push(' ');
        s.push_str(a.as_ref());
    }
    s
}

fn typed(vars: &[TypedVar]) -> String {
    vars.iter().map(|v| format!("{} - {}", v.name, v.ty)).collect::<Vec<_>>().join(" ")
}

pub fn fluent_ref(f: &FluentRef) -> String {
    format!("({}{})", f.name, args(f.args.iter().map(term)))
}

fn atom(a: &Atom) -> String {
    format!("({}{})", a.predicate, args(a.args.iter().map(term)))
}

pub fn expr(e: &Expr) -> String {
    match e {
        Expr::Const(c) => num(*c),
        Expr::Fluent(f) => fluent_ref(f),
        Expr::Param(p) => format!("?{p}"),
        Expr::Add(a, b) => format!("(+ {} {})", expr(a), expr(b)),
        Expr::Sub(a, b) => format!("(- {} {})", expr(a), expr(b)),
        Expr::Mul(a, b) => format!("(* {} {})", expr(a), expr(b)),
        Expr::Div(a, b) => format!("(/ {} {})", expr(a), expr(b)),
        Expr::Neg(a) => format!("(- {})", expr(a)),
        Expr::Pow(a, n) => format!("(^ {} {n})", expr(a)),
        Expr::Sqrt(a) => format!("(sqrt {})", expr(a)),
    }
}

pub fn condition(c: &Condition) -> String {
    match c {
        Condition::Prop { atom: a, positive: true } => atom(a),
        Condition::Prop { atom: a, positive: false } => format!("(not {})", atom(a)),
        Condition::Equality { left, right, positive } => {
            let eq = format!("(= {} {})", term(left), term(right));
            if *positive {
                eq
            } else {
                format!("(not {eq})")
            }
        }
        Condition::NumericInterval(n) => {
            let op = if n.closed { "<=" } else { "<" };
            format!("({op} {} {} {})", num(n.lower), expr(&n.expr), num(n.upper))
        }
        Condition::RegionMembership { x, y, region } => {
            format!("(inside {} {} {})", fluent_ref(x), fluent_ref(y), term(region))
        }
    }
}

fn conjunction(cs: &[Condition]) -> String {
    format!("(and{})", args(cs.iter().map(condition)))
}

fn effects(plus: &[Atom], minus: &[Atom], numeric: &[NumericEffect]) -> String {
    let mut parts: Vec<String> = plus.iter().map(atom).collect();
    parts.extend(minus.iter().map(|a| format!("(not {})", atom(a))));
    for n in numeric {
        let op = match n.direction {
            Direction::Increase => "increase",
            Direction::Decrease => "decrease",
        };
        parts.push(format!("({op} {} {})", fluent_ref(&n.target), expr(&n.expr)));
    }
    format!("(and{})", args(parts))
}

fn params(objs: &[TypedVar], reals: &[String]) -> String {
    let mut s = typed(objs);
    if !reals.is_empty() {
        if !s.is_empty() {
            s.push(' ');
        }
        s.push_str(&reals.iter().map(|r| format!("?{r}")).collect::<Vec<_>>().join(" "));
        s.push_str(" - real");
    }
    format!("({s})")
}

pub fn print_domain(d: &DomainDef) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "(define (domain {})", d.name);
    if !d.requirements.is_empty() {
        let _ = writeln!(s, "  (:requirements{})", args(&d.requirements));
    }
    if !d.types.is_empty() {
        let t: Vec<String> = d.types.iter().map(|t| format!("{} - {}", t.name, t.parent)).collect();
        let _ = writeln!(s, "  (:types {})", t.join(" "));
    }
    let _ = write!(s, "  (:predicates");
    for p in &d.predicates {
        let _ = write!(s, "\n    ({}{})", p.name, if p.params.is_empty() { String::new() } else { format!(" {}", typed(&p.params)) });
    }
    let _ = writeln!(s, ")");
    if !d.functions.is_empty() {
        let _ = write!(s, "  (:functions");
        for f in &d.functions {
            let _ = write!(s, "\n    ({}{})", f.name, if f.params.is_empty() { String::new() } else { format!(" {}", typed(&f.params)) });
        }
        let _ = writeln!(s, ")");
    }
    for a in &d.actions {
        let _ = writeln!(s, "  (:action {}", a.name);
        let _ = writeln!(s, "    :parameters {}", params(&a.object_params, &a.numeric_params));
        let _ = writeln!(s, "    :precondition {}", conjunction(&a.precondition));
        let _ = writeln!(s, "    :effect {})", effects(&a.eff_plus, &a.eff_minus, &a.eff_numeric));
    }
    for e in &d.events {
        let _ = writeln!(s, "  (:event {}", e.name);
        let _ = writeln!(s, "    :parameters {}", params(&e.object_params, &[]));
        let _ = writeln!(s, "    :precondition {}", conjunction(&e.precondition));
        let _ = writeln!(s, "    :effect {})", effects(&e.eff_plus, &e.eff_minus, &[]));
    }
    s.push_str(")\n");
    s
}

pub fn print_problem(p: &ProblemDef) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "(define (problem {})", p.name);
    let _ = writeln!(s, "  (:domain {})", p.domain);
    if !p.objects.is_empty() {
        let o: Vec<String> = p.objects.iter().map(|o| format!("{} - {}", o.name, o.ty)).collect();
        let _ = writeln!(s, "  (:objects {})", o.join(" "));
    }
    let _ = write!(s, "  (:init");
    for a in &p.init_props {
        let _ = write!(s, "\n    ({}{})", a.predicate, args(&a.args));
    }
    for (f, v) in &p.init_fluents {
        let _ = write!(s, "\n    (= ({}{}) {})", f.name, args(&f.args), num(*v));
    }
    let _ = writeln!(s, ")");
    let _ = writeln!(s, "  (:goal {})", conjunction(&p.goal));
    if !p.regions.is_empty() {
        let _ = write!(s, "  (:regions");
        for r in &p.regions {
            match &r.shape {
                RegionShape::Rect { x1, y1, x2, y2 } => {
                    let _ = write!(s, "\n    (rect {} {} {} {} {})", r.name, num(*x1), num(*y1), num(*x2), num(*y2));
                }
                RegionShape::Polygon(pts) => {
                    let coords: Vec<String> = pts.iter().map(|(x, y)| format!("{} {}", num(*x), num(*y))).collect();
                    let _ = write!(s, "\n    (poly {} {})", r.name, coords.join(" "));
                }
            }
        }
        for o in &p.obstacles {
            let _ = write!(s, "\n    (obstacle {o})");
        }
        for o in &p.objectives {
            let _ = write!(s, "\n    (objective {o})");
        }
        let _ = writeln!(s, ")");
    }
    if !p.bounds.is_empty() {
        let _ = write!(s, "  (:parameters-bounds");
        for b in &p.bounds {
            let _ = write!(s, "\n    (<= {} ?{} {})", num(b.lower), b.slot, num(b.upper));
        }
        let _ = writeln!(s, ")");
    }
    if let Some(m) = &p.metric {
        let sense = match m.sense {
            MetricSense::Minimize => "minimize",
            MetricSense::Maximize => "maximize",
        };
        let _ = writeln!(s, "  (:metric {sense} {})", expr(&m.expr));
    }
    s.push_str(")\n");
    s
}

impl fmt::Display for DomainDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_domain(self))
    }
}

impl fmt::Display for ProblemDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_problem(self))
    }
}
