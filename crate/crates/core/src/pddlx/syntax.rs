//! Condition, expression and effect readers shared by domain and problem parsing.

use std::collections::HashMap;

use super::ast::*;
use super::error::{ParseError, Result, Span};
use super::lexer::{parse_number, SExpr};

/// Predicates with built-in meaning: region flags set in the problem.
pub const BUILTIN_PREDICATES: [&str; 2] = ["obstacle", "objective"];

/// Name resolution context for one schema or one problem.
pub(crate) struct Scope<'a> {
    pub domain: &'a DomainDef,
    /// Object variables (with `?`) and their types.
    pub vars: HashMap<String, String>,
    /// Real-valued parameter names without `?`.
    pub numeric: Vec<String>,
    /// Problem objects, when resolving constants.
    pub objects: Option<&'a HashMap<String, String>>,
    /// Problem region names, for `inside` constants.
    pub regions: Option<&'a [String]>,
}

fn err(span: Span, msg: impl Into<String>) -> ParseError {
    ParseError::syntax(span, msg)
}

fn sem(span: Span, msg: impl Into<String>) -> ParseError {
    ParseError::semantic(span, msg)
}

pub(crate) fn expect_list<'e>(e: &'e SExpr, what: &str) -> Result<&'e [SExpr]> {
    e.as_list().ok_or_else(|| err(e.span(), format!("expected list for {what}")))
}

pub(crate) fn expect_atom<'e>(e: &'e SExpr, what: &str) -> Result<&'e str> {
    e.as_atom().ok_or_else(|| err(e.span(), format!("expected {what}")))
}

pub(crate) fn expect_name<'e>(e: &'e SExpr, what: &str) -> Result<&'e str> {
    let a = expect_atom(e, what)?;
    if a.starts_with('?') || a.starts_with(':') || parse_number(a).is_some() {
        return Err(err(e.span(), format!("expected {what}, found {a:?}")));
    }
    Ok(a)
}

/// `a b - t c - u d` style list. Untyped entries get `object`.
pub(crate) fn typed_list(items: &[SExpr]) -> Result<Vec<(String, String, Span)>> {
    let mut out = Vec::new();
    let mut pending: Vec<(String, Span)> = Vec::new();
    let mut i = 0;
    while i < items.len() {
        let a = expect_atom(&items[i], "name")?;
        if a == "-" {
            let ty = items
                .get(i + 1)
                .ok_or_else(|| err(items[i].span(), "missing type after '-'"))?;
            let ty = expect_name(ty, "type name")?;
            if pending.is_empty() {
                return Err(err(items[i].span(), "type with no names"));
            }
            for (n, s) in pending.drain(..) {
                out.push((n, ty.to_string(), s));
            }
            i += 2;
        } else {
            pending.push((a.to_string(), items[i].span()));
            i += 1;
        }
    }
    for (n, s) in pending {
        out.push((n, "object".to_string(), s));
    }
    Ok(out)
}

impl<'a> Scope<'a> {
    fn term(&self, e: &SExpr, want_ty: Option<&str>) -> Result<Term> {
        let a = expect_atom(e, "term")?;
        if a.starts_with('?') {
            let ty = match self.vars.get(a) {
                Some(t) => t,
                None if self.numeric.iter().any(|n| a[1..] == **n) => {
                    return Err(sem(e.span(), format!("real parameter {a} used as object")))
                }
                None => return Err(sem(e.span(), format!("undeclared variable {a}"))),
            };
            if let Some(want) = want_ty {
                if !self.compatible(ty, want) {
                    return Err(sem(e.span(), format!("{a} has type {ty}, expected {want}")));
                }
            }
            return Ok(Term::Var(a.to_string()));
        }
        let name = expect_name(e, "object")?;
        match self.objects {
            Some(objs) => match objs.get(name) {
                Some(ty) => {
                    if let Some(want) = want_ty {
                        if !self.domain.is_subtype(ty, want) {
                            return Err(sem(e.span(), format!("object {name} has type {ty}, expected {want}")));
                        }
                    }
                    Ok(Term::Const(name.to_string()))
                }
                None => Err(sem(e.span(), format!("undeclared object {name}"))),
            },
            None => Err(sem(e.span(), format!("unknown constant {name}"))),
        }
    }

    fn compatible(&self, a: &str, b: &str) -> bool {
        self.domain.is_subtype(a, b) || self.domain.is_subtype(b, a)
    }

    fn region_term(&self, e: &SExpr) -> Result<Term> {
        let a = expect_atom(e, "region")?;
        if a.starts_with('?') {
            return self.term(e, None);
        }
        if let Some(regions) = self.regions {
            if regions.iter().any(|r| r == a) {
                return Ok(Term::Const(a.to_string()));
            }
            return Err(sem(e.span(), format!("undeclared region {a}")));
        }
        self.term(e, None)
    }

    pub(crate) fn atom(&self, e: &SExpr) -> Result<Atom> {
        let items = expect_list(e, "atom")?;
        let head = items.first().ok_or_else(|| err(e.span(), "empty atom"))?;
        let name = expect_name(head, "predicate name")?;
        let args = &items[1..];
        if BUILTIN_PREDICATES.contains(&name) {
            if args.len() != 1 {
                return Err(sem(e.span(), format!("{name} takes one region argument")));
            }
            return Ok(Atom { predicate: name.to_string(), args: vec![self.region_term(&args[0])?] });
        }
        let decl = self
            .domain
            .predicate(name)
            .ok_or_else(|| sem(head.span(), format!("undeclared predicate {name}")))?;
        if decl.params.len() != args.len() {
            return Err(sem(
                e.span(),
                format!("predicate {name} expects {} arguments, got {}", decl.params.len(), args.len()),
            ));
        }
        let args = args
            .iter()
            .zip(&decl.params)
            .map(|(a, p)| self.term(a, Some(&p.ty)))
            .collect::<Result<_>>()?;
        Ok(Atom { predicate: name.to_string(), args })
    }

    fn fluent_from(&self, name: &str, args: &[SExpr], span: Span) -> Result<FluentRef> {
        let decl = self
            .domain
            .function(name)
            .ok_or_else(|| sem(span, format!("undeclared function {name}")))?;
        if decl.params.len() != args.len() {
            return Err(sem(
                span,
                format!("function {name} expects {} arguments, got {}", decl.params.len(), args.len()),
            ));
        }
        let args = args
            .iter()
            .zip(&decl.params)
            .map(|(a, p)| self.term(a, Some(&p.ty)))
            .collect::<Result<_>>()?;
        Ok(FluentRef { name: name.to_string(), args })
    }

    pub(crate) fn fluent(&self, e: &SExpr) -> Result<FluentRef> {
        match e {
            SExpr::Atom(_, s) => {
                let name = expect_name(e, "function name")?;
                self.fluent_from(name, &[], *s)
            }
            SExpr::List(items, s) => {
                let head = items.first().ok_or_else(|| err(*s, "empty fluent"))?;
                let name = expect_name(head, "function name")?;
                self.fluent_from(name, &items[1..], *s)
            }
        }
    }

    pub(crate) fn expr(&self, e: &SExpr) -> Result<Expr> {
        match e {
            SExpr::Atom(a, s) => {
                if let Some(v) = parse_number(a) {
                    return Ok(Expr::Const(v));
                }
                if let Some(p) = a.strip_prefix('?') {
                    if self.numeric.iter().any(|n| n == p) {
                        return Ok(Expr::Param(p.to_string()));
                    }
                    if self.vars.contains_key(a) {
                        return Err(sem(*s, format!("object variable {a} used in numeric expression")));
                    }
                    return Err(sem(*s, format!("undeclared variable {a}")));
                }
                Ok(Expr::Fluent(self.fluent(e)?))
            }
            SExpr::List(items, s) => {
                let head = items.first().ok_or_else(|| err(*s, "empty expression"))?;
                let op = expect_atom(head, "operator")?;
                let args = &items[1..];
                let bin = |f: fn(Box<Expr>, Box<Expr>) -> Expr| -> Result<Expr> {
                    if args.len() < 2 {
                        return Err(err(*s, format!("{op} needs at least two operands")));
                    }
                    let mut acc = self.expr(&args[0])?;
                    for a in &args[1..] {
                        acc = f(Box::new(acc), Box::new(self.expr(a)?));
                    }
                    Ok(acc)
                };
                match op {
                    "+" => bin(Expr::Add),
                    "*" => bin(Expr::Mul),
                    "-" if args.len() == 1 => Ok(Expr::Neg(Box::new(self.expr(&args[0])?))),
                    "-" if args.len() == 2 => bin(Expr::Sub),
                    "/" if args.len() == 2 => bin(Expr::Div),
                    "-" | "/" => Err(err(*s, format!("wrong operand count for {op}"))),
                    "^" => {
                        if args.len() != 2 {
                            return Err(err(*s, "^ takes an expression and an integer"));
                        }
                        let n = args[1]
                            .as_atom()
                            .and_then(|a| a.parse::<i32>().ok())
                            .ok_or_else(|| err(args[1].span(), "exponent must be an integer"))?;
                        Ok(Expr::Pow(Box::new(self.expr(&args[0])?), n))
                    }
                    "sqrt" => {
                        if args.len() != 1 {
                            return Err(err(*s, "sqrt takes one operand"));
                        }
                        Ok(Expr::Sqrt(Box::new(self.expr(&args[0])?)))
                    }
                    _ => Ok(Expr::Fluent(self.fluent(e)?)),
                }
            }
        }
    }

    fn is_object_term(&self, e: &SExpr) -> bool {
        match e.as_atom() {
            Some(a) if a.starts_with('?') => self.vars.contains_key(a),
            Some(a) => {
                parse_number(a).is_none()
                    && self.objects.map(|o| o.contains_key(a)).unwrap_or(false)
                    && self.domain.function(a).is_none()
            }
            None => false,
        }
    }

    /// Reads a goal or precondition into a flat conjunction.
    pub(crate) fn conditions(&self, e: &SExpr, out: &mut Vec<Condition>) -> Result<()> {
        let items = expect_list(e, "condition")?;
        let Some(head) = items.first() else {
            // `()` is an empty conjunction
            return Ok(());
        };
        let op = expect_atom(head, "condition keyword")?;
        let args = &items[1..];
        let s = e.span();
        match op {
            "and" => {
                for a in args {
                    self.conditions(a, out)?;
                }
            }
            "not" => {
                if args.len() != 1 {
                    return Err(err(s, "not takes one condition"));
                }
                let inner = &args[0];
                if inner.head() == Some("=") {
                    match self.equality(inner)? {
                        Some(Condition::Equality { left, right, .. }) => {
                            out.push(Condition::Equality { left, right, positive: false })
                        }
                        _ => return Err(err(s, "negated numeric comparison is not supported")),
                    }
                } else if matches!(inner.head(), Some("<=" | "<" | ">=" | ">" | "inside" | "and" | "not")) {
                    return Err(err(s, "only literals can be negated"));
                } else {
                    out.push(Condition::Prop { atom: self.atom(inner)?, positive: false });
                }
            }
            "=" => match self.equality(e)? {
                Some(c) => out.push(c),
                None => out.push(self.comparison(op, args, s)?),
            },
            "<=" | "<" | ">=" | ">" => out.push(self.comparison(op, args, s)?),
            "inside" => {
                if args.len() != 3 {
                    return Err(err(s, "inside takes x fluent, y fluent and region"));
                }
                out.push(Condition::RegionMembership {
                    x: self.fluent(&args[0])?,
                    y: self.fluent(&args[1])?,
                    region: self.region_term(&args[2])?,
                });
            }
            "or" | "imply" | "forall" | "exists" => {
                return Err(err(s, format!("{op} conditions are not supported")))
            }
            _ => out.push(Condition::Prop { atom: self.atom(e)?, positive: true }),
        }
        Ok(())
    }

    fn equality(&self, e: &SExpr) -> Result<Option<Condition>> {
        let items = expect_list(e, "equality")?;
        let args = &items[1..];
        if args.len() == 2 && self.is_object_term(&args[0]) && self.is_object_term(&args[1]) {
            return Ok(Some(Condition::Equality {
                left: self.term(&args[0], None)?,
                right: self.term(&args[1], None)?,
                positive: true,
            }));
        }
        Ok(None)
    }

    fn comparison(&self, op: &str, args: &[SExpr], s: Span) -> Result<Condition> {
        let closed = !matches!(op, "<" | ">");
        if args.len() == 3 {
            if !matches!(op, "<=" | "<") {
                return Err(err(s, format!("three-operand form needs <= or <, found {op}")));
            }
            let lo = self.expr(&args[0])?.eval_const();
            let hi = self.expr(&args[2])?.eval_const();
            let (Some(lower), Some(upper)) = (lo.or(const_inf(&args[0])), hi.or(const_inf(&args[2]))) else {
                return Err(err(s, "interval bounds must be constants"));
            };
            if lower > upper {
                return Err(sem(s, format!("empty interval [{lower}, {upper}]")));
            }
            return Ok(Condition::NumericInterval(NumericCondition {
                expr: self.expr(&args[1])?,
                lower,
                upper,
                closed,
            }));
        }
        if args.len() != 2 {
            return Err(err(s, format!("{op} takes two or three operands")));
        }
        let l = self.expr(&args[0])?;
        let r = self.expr(&args[1])?;
        // normalise to expr within [lower, upper]
        let (expr, c, expr_on_left) = match (l.eval_const(), r.eval_const()) {
            (_, Some(c)) => (l, c, true),
            (Some(c), None) => (r, c, false),
            (None, None) => (Expr::Sub(Box::new(l), Box::new(r)), 0.0, true),
        };
        let (lower, upper) = match (op, expr_on_left) {
            ("=", _) => (c, c),
            ("<=" | "<", true) | (">=" | ">", false) => (f64::NEG_INFINITY, c),
            _ => (c, f64::INFINITY),
        };
        Ok(Condition::NumericInterval(NumericCondition { expr, lower, upper, closed }))
    }

    /// Reads an effect into (adds, deletes, numeric updates).
    pub(crate) fn effects(
        &self,
        e: &SExpr,
        plus: &mut Vec<Atom>,
        minus: &mut Vec<Atom>,
        numeric: &mut Vec<NumericEffect>,
    ) -> Result<()> {
        let items = expect_list(e, "effect")?;
        let Some(head) = items.first() else {
            return Ok(());
        };
        let op = expect_atom(head, "effect keyword")?;
        let args = &items[1..];
        match op {
            "and" => {
                for a in args {
                    self.effects(a, plus, minus, numeric)?;
                }
            }
            "not" => {
                if args.len() != 1 {
                    return Err(err(e.span(), "not takes one atom"));
                }
                minus.push(self.atom(&args[0])?);
            }
            "increase" | "decrease" => {
                if args.len() != 2 {
                    return Err(err(e.span(), format!("{op} takes a fluent and an expression")));
                }
                numeric.push(NumericEffect {
                    target: self.fluent(&args[0])?,
                    direction: if op == "increase" { Direction::Increase } else { Direction::Decrease },
                    expr: self.expr(&args[1])?,
                });
            }
            "assign" | "scale-up" | "scale-down" | "when" | "forall" => {
                return Err(err(e.span(), format!("{op} effects are not supported")))
            }
            _ => {
                let a = self.atom(e)?;
                if BUILTIN_PREDICATES.contains(&a.predicate.as_str()) {
                    return Err(sem(e.span(), format!("{} is static and cannot be an effect", a.predicate)));
                }
                plus.push(a);
            }
        }
        Ok(())
    }
}

fn const_inf(e: &SExpr) -> Option<f64> {
    e.as_atom().and_then(parse_number)
}
