//! Syntax trees for domains and problems.

use serde::Serialize;

/// Symbolic argument: a `?variable` or an object constant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Term {
    Var(String),
    Const(String),
}

impl Term {
    pub fn name(&self) -> &str {
        match self {
            Term::Var(s) | Term::Const(s) => s,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TypedVar {
    pub name: String,
    pub ty: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TypeDecl {
    pub name: String,
    pub parent: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PredicateDecl {
    pub name: String,
    pub params: Vec<TypedVar>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FunctionDecl {
    pub name: String,
    pub params: Vec<TypedVar>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FluentRef {
    pub name: String,
    pub args: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Expr {
    Const(f64),
    Fluent(FluentRef),
    /// Real-valued action parameter, stored without the leading `?`.
    Param(String),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, i32),
    Sqrt(Box<Expr>),
}

impl Expr {
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Const(_) => true,
            Expr::Fluent(_) | Expr::Param(_) => false,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.is_constant() && b.is_constant()
            }
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Sqrt(a) => a.is_constant(),
        }
    }

    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Expr)) {
        f(self);
        match self {
            Expr::Const(_) | Expr::Fluent(_) | Expr::Param(_) => {}
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Sqrt(a) => a.visit(f),
        }
    }

    /// Evaluates an expression built only from constants.
    pub fn eval_const(&self) -> Option<f64> {
        Some(match self {
            Expr::Const(c) => *c,
            Expr::Fluent(_) | Expr::Param(_) => return None,
            Expr::Add(a, b) => a.eval_const()? + b.eval_const()?,
            Expr::Sub(a, b) => a.eval_const()? - b.eval_const()?,
            Expr::Mul(a, b) => a.eval_const()? * b.eval_const()?,
            Expr::Div(a, b) => a.eval_const()? / b.eval_const()?,
            Expr::Neg(a) => -a.eval_const()?,
            Expr::Pow(a, n) => a.eval_const()?.powi(*n),
            Expr::Sqrt(a) => a.eval_const()?.sqrt(),
        })
    }
}

/// A numeric test `lower <= expr <= upper` (strict when `closed` is false).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumericCondition {
    pub expr: Expr,
    pub lower: f64,
    pub upper: f64,
    pub closed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Condition {
    Prop { atom: Atom, positive: bool },
    /// `(= ?a ?b)` over objects, resolved statically while grounding.
    Equality { left: Term, right: Term, positive: bool },
    NumericInterval(NumericCondition),
    RegionMembership { x: FluentRef, y: FluentRef, region: Term },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    Increase,
    Decrease,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumericEffect {
    pub target: FluentRef,
    pub direction: Direction,
    pub expr: Expr,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ActionSchema {
    pub name: String,
    pub object_params: Vec<TypedVar>,
    /// Real-valued slots, stored without `?`.
    pub numeric_params: Vec<String>,
    pub precondition: Vec<Condition>,
    pub eff_plus: Vec<Atom>,
    pub eff_minus: Vec<Atom>,
    pub eff_numeric: Vec<NumericEffect>,
}

impl ActionSchema {
    pub fn is_logical(&self) -> bool {
        self.eff_numeric.is_empty()
    }
}

/// Events carry propositional effects only.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EventSchema {
    pub name: String,
    pub object_params: Vec<TypedVar>,
    pub precondition: Vec<Condition>,
    pub eff_plus: Vec<Atom>,
    pub eff_minus: Vec<Atom>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DomainDef {
    pub name: String,
    pub requirements: Vec<String>,
    /// Declared types; the implicit root `object` is not listed.
    pub types: Vec<TypeDecl>,
    pub predicates: Vec<PredicateDecl>,
    pub functions: Vec<FunctionDecl>,
    pub actions: Vec<ActionSchema>,
    pub events: Vec<EventSchema>,
}

impl DomainDef {
    /// Global numeric slot names, by first appearance over the action list.
    pub fn numeric_slots(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for a in &self.actions {
            for p in &a.numeric_params {
                if !out.contains(p) {
                    out.push(p.clone());
                }
            }
        }
        out
    }

    /// True when `ty` equals `ancestor` or descends from it.
    pub fn is_subtype(&self, ty: &str, ancestor: &str) -> bool {
        let mut cur = ty;
        for _ in 0..=self.types.len() {
            if cur == ancestor {
                return true;
            }
            match self.types.iter().find(|t| t.name == cur) {
                Some(t) => cur = &t.parent,
                None => return false,
            }
        }
        false
    }

    pub fn predicate(&self, name: &str) -> Option<&PredicateDecl> {
        self.predicates.iter().find(|p| p.name == name)
    }

    pub fn function(&self, name: &str) -> Option<&FunctionDecl> {
        self.functions.iter().find(|p| p.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TypedObject {
    pub name: String,
    pub ty: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GroundAtom {
    pub predicate: String,
    pub args: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GroundFluent {
    pub name: String,
    pub args: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum RegionShape {
    Rect { x1: f64, y1: f64, x2: f64, y2: f64 },
    Polygon(Vec<(f64, f64)>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionDecl {
    pub name: String,
    pub shape: RegionShape,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamBound {
    pub slot: String,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MetricSense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metric {
    pub sense: MetricSense,
    pub expr: Expr,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProblemDef {
    pub name: String,
    pub domain: String,
    pub objects: Vec<TypedObject>,
    pub init_props: Vec<GroundAtom>,
    pub init_fluents: Vec<(GroundFluent, f64)>,
    pub goal: Vec<Condition>,
    pub regions: Vec<RegionDecl>,
    pub obstacles: Vec<String>,
    pub objectives: Vec<String>,
    /// One entry per domain slot, in slot order, defaults filled in.
    pub bounds: Vec<ParamBound>,
    pub metric: Option<Metric>,
}

impl ProblemDef {
    pub fn bound(&self, slot: &str) -> Option<&ParamBound> {
        self.bounds.iter().find(|b| b.slot == slot)
    }

    pub fn fluent_value(&self, f: &GroundFluent) -> Option<f64> {
        self.init_fluents.iter().find(|(g, _)| g == f).map(|(_, v)| *v)
    }
}
