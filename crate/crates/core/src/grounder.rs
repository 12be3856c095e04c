//! Instantiation of schemas over objects.
//!
//! Object slots are enumerated; real-valued slots stay symbolic and map onto
//! a global slot universe shared by every schema (two schemas both declaring
//! `?d` read the same per-step value).
//!
//! Ground actions are indexed by walking schemas in declaration order and
//! bindings in lexicographic object order, then reversing that list. Under this
//! ordering the grounded toy domain `pick-up`, `move`, `navigate` puts
//! `navigate` first and `pick-up(p1 A)` last.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::geometry::{Point, Region};
use crate::pddlx::{
    ActionSchema, Atom, Condition, Direction, DomainDef, EventSchema, Expr, FluentRef, GroundAtom,
    GroundFluent, ProblemDef, RegionShape, Term,
};

pub const DEFAULT_GROUNDING_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GroundError {
    #[error("grounding produced more than {cap} actions")]
    GroundingExplosion { cap: usize },
    #[error("fluent {0} is used but has no initial value")]
    UnassignedFluent(String),
    #[error("region {0} has no geometry in the problem")]
    UnknownRegion(String),
    #[error("invalid region {name}: {reason}")]
    BadRegion { name: String, reason: String },
    #[error("goal requires a static region flag that does not hold")]
    UnsatisfiableGoal,
    #[error("problem is for domain {found}, expected {expected}")]
    DomainMismatch { expected: String, found: String },
}

/// Ground numeric expression over fluent indices and slot indices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum GExpr {
    Const(f64),
    Fluent(usize),
    Param(usize),
    Add(Box<GExpr>, Box<GExpr>),
    Sub(Box<GExpr>, Box<GExpr>),
    Mul(Box<GExpr>, Box<GExpr>),
    Div(Box<GExpr>, Box<GExpr>),
    Neg(Box<GExpr>),
    Pow(Box<GExpr>, i32),
    Sqrt(Box<GExpr>),
}

impl GExpr {
    pub fn eval(&self, values: &[f64], theta: &[f64]) -> f64 {
        match self {
            GExpr::Const(c) => *c,
            GExpr::Fluent(k) => values[*k],
            GExpr::Param(j) => theta[*j],
            GExpr::Add(a, b) => a.eval(values, theta) + b.eval(values, theta),
            GExpr::Sub(a, b) => a.eval(values, theta) - b.eval(values, theta),
            GExpr::Mul(a, b) => a.eval(values, theta) * b.eval(values, theta),
            GExpr::Div(a, b) => a.eval(values, theta) / b.eval(values, theta),
            GExpr::Neg(a) => -a.eval(values, theta),
            GExpr::Pow(a, n) => a.eval(values, theta).powi(*n),
            GExpr::Sqrt(a) => a.eval(values, theta).sqrt(),
        }
    }

    pub fn depends_on_params(&self) -> bool {
        let mut found = false;
        self.visit(&mut |e| found |= matches!(e, GExpr::Param(_)));
        found
    }

    pub fn fluents(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.visit(&mut |e| {
            if let GExpr::Fluent(k) = e {
                out.insert(*k);
            }
        });
        out
    }

    pub fn params(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.visit(&mut |e| {
            if let GExpr::Param(j) = e {
                out.insert(*j);
            }
        });
        out
    }

    pub fn visit(&self, f: &mut impl FnMut(&GExpr)) {
        f(self);
        match self {
            GExpr::Const(_) | GExpr::Fluent(_) | GExpr::Param(_) => {}
            GExpr::Add(a, b) | GExpr::Sub(a, b) | GExpr::Mul(a, b) | GExpr::Div(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            GExpr::Neg(a) | GExpr::Pow(a, _) | GExpr::Sqrt(a) => a.visit(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumericTest {
    pub expr: GExpr,
    pub lower: f64,
    pub upper: f64,
    pub closed: bool,
}

impl NumericTest {
    pub fn holds(&self, v: f64) -> bool {
        if self.closed {
            self.lower <= v && v <= self.upper
        } else {
            self.lower < v && v < self.upper
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionTest {
    pub x: usize,
    pub y: usize,
    pub region: usize,
}

/// Compiled precondition or goal.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct GroundCondition {
    pub pos: Vec<usize>,
    pub neg: Vec<usize>,
    pub numeric: Vec<NumericTest>,
    pub regions: Vec<RegionTest>,
}

impl GroundCondition {
    pub fn has_numeric(&self) -> bool {
        !self.numeric.is_empty() || !self.regions.is_empty()
    }
}

/// One update `v_k += kappa * expr`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroundNumericEffect {
    pub fluent: usize,
    pub kappa: i8,
    pub expr: GExpr,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroundAction {
    pub index: usize,
    pub schema: String,
    pub objects: Vec<String>,
    /// Global slots declared by the schema, in declaration order.
    pub slots: Vec<usize>,
    pub pre: GroundCondition,
    pub add: Vec<usize>,
    pub del: Vec<usize>,
    /// At most one entry per fluent.
    pub numeric: Vec<GroundNumericEffect>,
}

impl GroundAction {
    pub fn is_logical(&self) -> bool {
        self.numeric.is_empty()
    }

    pub fn label(&self) -> String {
        if self.objects.is_empty() {
            self.schema.clone()
        } else {
            format!("{} {}", self.schema, self.objects.join(" "))
        }
    }

    pub fn affects(&self, k: usize) -> bool {
        self.numeric.iter().any(|e| e.fluent == k)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroundEvent {
    pub schema: String,
    pub objects: Vec<String>,
    pub pre: GroundCondition,
    pub add: Vec<usize>,
    pub del: Vec<usize>,
}

/// Dense effect rows of one action.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EffectRows {
    /// Propositional effect row in {-1, 0, 1}.
    pub e: Vec<i8>,
    /// Direction row in {-1, 0, 1}.
    pub kappa: Vec<i8>,
    /// Parameter-independent effect entries.
    pub independent: Vec<Option<GExpr>>,
    /// Parameter-dependent effect entries.
    pub dependent: Vec<Option<GExpr>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InitialState {
    pub props: Vec<i8>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GroundedModel {
    pub domain: String,
    pub problem: String,
    pub propositions: Vec<GroundAtom>,
    pub fluents: Vec<GroundFluent>,
    pub slots: Vec<String>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub actions: Vec<GroundAction>,
    pub events: Vec<GroundEvent>,
    pub goal: GroundCondition,
    pub regions: Vec<Region>,
    /// (x, y) fluent pairs that appear together in region tests.
    pub position_pairs: Vec<(usize, usize)>,
    pub init: InitialState,
    #[serde(skip)]
    prop_index: HashMap<GroundAtom, usize>,
    #[serde(skip)]
    fluent_index: HashMap<GroundFluent, usize>,
    #[serde(skip)]
    action_index: HashMap<String, usize>,
}

impl GroundedModel {
    pub fn m(&self) -> usize {
        self.propositions.len()
    }

    pub fn k(&self) -> usize {
        self.fluents.len()
    }

    pub fn t(&self) -> usize {
        self.slots.len()
    }

    pub fn x(&self) -> usize {
        self.actions.len()
    }

    /// Index of the synthetic terminator, one past the last ground action.
    pub fn end_index(&self) -> usize {
        self.actions.len()
    }

    pub fn prop(&self, a: &GroundAtom) -> Option<usize> {
        self.prop_index.get(a).copied()
    }

    pub fn prop_named(&self, pred: &str, args: &[&str]) -> Option<usize> {
        self.prop(&GroundAtom { predicate: pred.into(), args: args.iter().map(|s| s.to_string()).collect() })
    }

    pub fn fluent(&self, f: &GroundFluent) -> Option<usize> {
        self.fluent_index.get(f).copied()
    }

    pub fn fluent_named(&self, name: &str, args: &[&str]) -> Option<usize> {
        self.fluent(&GroundFluent { name: name.into(), args: args.iter().map(|s| s.to_string()).collect() })
    }

    /// Looks up an action by its label, e.g. `glide v0`.
    pub fn action_by_label(&self, label: &str) -> Option<usize> {
        self.action_index.get(label).copied()
    }

    pub fn slot(&self, name: &str) -> Option<usize> {
        self.slots.iter().position(|s| s == name)
    }

    pub fn obstacles(&self) -> impl Iterator<Item = (usize, &Region)> {
        self.regions.iter().enumerate().filter(|(_, r)| r.is_obstacle)
    }

    pub fn one_hot(&self, x: usize) -> Vec<u8> {
        (0..self.x()).map(|i| u8::from(i == x)).collect()
    }

    pub fn compile_effect_rows(&self, a: &GroundAction) -> EffectRows {
        let mut e = vec![0i8; self.m()];
        for &d in &a.del {
            e[d] = -1;
        }
        // add wins over delete
        for &p in &a.add {
            e[p] = 1;
        }
        let mut kappa = vec![0i8; self.k()];
        let mut independent = vec![None; self.k()];
        let mut dependent = vec![None; self.k()];
        for n in &a.numeric {
            kappa[n.fluent] = n.kappa;
            if n.expr.depends_on_params() {
                dependent[n.fluent] = Some(n.expr.clone());
            } else {
                independent[n.fluent] = Some(n.expr.clone());
            }
        }
        EffectRows { e, kappa, independent, dependent }
    }

    /// The X x M matrix of propositional effects.
    pub fn effect_matrix(&self) -> Vec<Vec<i8>> {
        self.actions.iter().map(|a| self.compile_effect_rows(a).e).collect()
    }

    /// The X x K matrix of numeric directions.
    pub fn kappa_matrix(&self) -> Vec<Vec<i8>> {
        self.actions.iter().map(|a| self.compile_effect_rows(a).kappa).collect()
    }

    /// Row selected from `matrix` by a one-hot vector, computed as a product.
    pub fn select_row(one_hot: &[u8], matrix: &[Vec<i8>]) -> Vec<i8> {
        let width = matrix.first().map_or(0, Vec::len);
        let mut out = vec![0i8; width];
        for (w, row) in one_hot.iter().zip(matrix) {
            for (o, r) in out.iter_mut().zip(row) {
                *o += *w as i8 * r;
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).unwrap_or_else(|e| format!("{{\"error\": \"{e}\"}}"))
    }
}

type Binding = HashMap<String, String>;

struct Ctx<'a> {
    dom: &'a DomainDef,
    prob: &'a ProblemDef,
    props: BTreeSet<GroundAtom>,
    fluents: BTreeSet<GroundFluent>,
    region_names: Vec<String>,
    flags_obstacle: &'a [String],
    flags_objective: &'a [String],
}

fn resolve(t: &Term, b: &Binding) -> String {
    match t {
        Term::Var(v) => b.get(v).cloned().unwrap_or_else(|| v.clone()),
        Term::Const(c) => c.clone(),
    }
}

fn ground_atom(a: &Atom, b: &Binding) -> GroundAtom {
    GroundAtom { predicate: a.predicate.clone(), args: a.args.iter().map(|t| resolve(t, b)).collect() }
}

fn ground_fluent(f: &FluentRef, b: &Binding) -> GroundFluent {
    GroundFluent { name: f.name.clone(), args: f.args.iter().map(|t| resolve(t, b)).collect() }
}

/// Lifted, bound form of one condition before index assignment.
enum Lifted {
    Prop(GroundAtom, bool),
    Numeric(Expr, f64, f64, bool),
    Region(GroundFluent, GroundFluent, String),
}

struct Pending {
    schema: String,
    objects: Vec<String>,
    binding: Binding,
    conds: Vec<Lifted>,
    add: Vec<GroundAtom>,
    del: Vec<GroundAtom>,
    numeric: Vec<(GroundFluent, i8, Expr)>,
    slots: Vec<String>,
}

impl<'a> Ctx<'a> {
    fn objects_of(&self, ty: &str) -> Vec<String> {
        let mut v: Vec<String> = self
            .prob
            .objects
            .iter()
            .filter(|o| self.dom.is_subtype(&o.ty, ty))
            .map(|o| o.name.clone())
            .collect();
        v.sort();
        v
    }

    fn bindings(&self, params: &[crate::pddlx::TypedVar]) -> Vec<Binding> {
        let mut out = vec![Binding::new()];
        for p in params {
            let objs = self.objects_of(&p.ty);
            let mut next = Vec::with_capacity(out.len() * objs.len());
            for b in &out {
                for o in &objs {
                    let mut nb = b.clone();
                    nb.insert(p.name.clone(), o.clone());
                    next.push(nb);
                }
            }
            out = next;
        }
        out
    }

    /// Resolves static parts; `None` when the binding is filtered out.
    fn lift_conditions(&self, conds: &[Condition], b: &Binding) -> Option<Vec<Lifted>> {
        let mut out = Vec::new();
        for c in conds {
            match c {
                Condition::Prop { atom, positive } if crate::pddlx::BUILTIN_PREDICATES.contains(&atom.predicate.as_str()) => {
                    let r = resolve(&atom.args[0], b);
                    let flags = if atom.predicate == "obstacle" { self.flags_obstacle } else { self.flags_objective };
                    if flags.contains(&r) != *positive {
                        return None;
                    }
                }
                Condition::Prop { atom, positive } => out.push(Lifted::Prop(ground_atom(atom, b), *positive)),
                Condition::Equality { left, right, positive } => {
                    if (resolve(left, b) == resolve(right, b)) != *positive {
                        return None;
                    }
                }
                Condition::NumericInterval(n) => {
                    out.push(Lifted::Numeric(n.expr.clone(), n.lower, n.upper, n.closed))
                }
                Condition::RegionMembership { x, y, region } => {
                    out.push(Lifted::Region(ground_fluent(x, b), ground_fluent(y, b), resolve(region, b)))
                }
            }
        }
        Some(out)
    }

    fn note_expr(&mut self, e: &Expr, b: &Binding) {
        e.visit(&mut |n| {
            if let Expr::Fluent(f) = n {
                self.fluents.insert(ground_fluent(f, b));
            }
        });
    }

    fn note(&mut self, p: &Pending) {
        for c in &p.conds {
            match c {
                Lifted::Prop(a, _) => {
                    self.props.insert(a.clone());
                }
                Lifted::Numeric(e, ..) => self.note_expr(e, &p.binding),
                Lifted::Region(x, y, _) => {
                    self.fluents.insert(x.clone());
                    self.fluents.insert(y.clone());
                }
            }
        }
        self.props.extend(p.add.iter().cloned());
        self.props.extend(p.del.iter().cloned());
        for (f, _, e) in &p.numeric {
            self.fluents.insert(f.clone());
            self.note_expr(e, &p.binding);
        }
    }

    fn action(&self, s: &ActionSchema, b: Binding) -> Option<Pending> {
        let conds = self.lift_conditions(&s.precondition, &b)?;
        let mut numeric: Vec<(GroundFluent, i8, Expr)> = Vec::new();
        for n in &s.eff_numeric {
            let f = ground_fluent(&n.target, &b);
            let k: i8 = if n.direction == Direction::Increase { 1 } else { -1 };
            match numeric.iter_mut().find(|(g, _, _)| *g == f) {
                // merge repeated updates of one fluent into a single signed sum
                Some((_, k0, e0)) => {
                    let prev = std::mem::replace(e0, Expr::Const(0.0));
                    *e0 = if *k0 == k {
                        Expr::Add(Box::new(prev), Box::new(n.expr.clone()))
                    } else {
                        Expr::Sub(Box::new(prev), Box::new(n.expr.clone()))
                    };
                }
                None => numeric.push((f, k, n.expr.clone())),
            }
        }
        Some(Pending {
            schema: s.name.clone(),
            objects: s.object_params.iter().map(|p| b[&p.name].clone()).collect(),
            conds,
            add: s.eff_plus.iter().map(|a| ground_atom(a, &b)).collect(),
            del: s.eff_minus.iter().map(|a| ground_atom(a, &b)).collect(),
            numeric,
            slots: s.numeric_params.clone(),
            binding: b,
        })
    }

    fn event(&self, s: &EventSchema, b: Binding) -> Option<Pending> {
        let conds = self.lift_conditions(&s.precondition, &b)?;
        Some(Pending {
            schema: s.name.clone(),
            objects: s.object_params.iter().map(|p| b[&p.name].clone()).collect(),
            conds,
            add: s.eff_plus.iter().map(|a| ground_atom(a, &b)).collect(),
            del: s.eff_minus.iter().map(|a| ground_atom(a, &b)).collect(),
            numeric: Vec::new(),
            slots: Vec::new(),
            binding: b,
        })
    }
}

struct Indexer<'a> {
    props: &'a HashMap<GroundAtom, usize>,
    fluents: &'a HashMap<GroundFluent, usize>,
    slots: &'a [String],
    regions: &'a [String],
}

impl Indexer<'_> {
    fn expr(&self, e: &Expr, b: &Binding) -> GExpr {
        let bx = |e: &Expr| Box::new(self.expr(e, b));
        match e {
            Expr::Const(c) => GExpr::Const(*c),
            Expr::Fluent(f) => GExpr::Fluent(self.fluents[&ground_fluent(f, b)]),
            Expr::Param(p) => GExpr::Param(self.slots.iter().position(|s| s == p).expect("slot declared")),
            Expr::Add(a, c) => GExpr::Add(bx(a), bx(c)),
            Expr::Sub(a, c) => GExpr::Sub(bx(a), bx(c)),
            Expr::Mul(a, c) => GExpr::Mul(bx(a), bx(c)),
            Expr::Div(a, c) => GExpr::Div(bx(a), bx(c)),
            Expr::Neg(a) => GExpr::Neg(bx(a)),
            Expr::Pow(a, n) => GExpr::Pow(bx(a), *n),
            Expr::Sqrt(a) => GExpr::Sqrt(bx(a)),
        }
    }

    fn condition(&self, conds: &[Lifted], b: &Binding) -> Result<GroundCondition, GroundError> {
        let mut g = GroundCondition::default();
        for c in conds {
            match c {
                Lifted::Prop(a, true) => g.pos.push(self.props[a]),
                Lifted::Prop(a, false) => g.neg.push(self.props[a]),
                Lifted::Numeric(e, lo, hi, closed) => {
                    g.numeric.push(NumericTest { expr: self.expr(e, b), lower: *lo, upper: *hi, closed: *closed })
                }
                Lifted::Region(x, y, r) => g.regions.push(RegionTest {
                    x: self.fluents[x],
                    y: self.fluents[y],
                    region: self
                        .regions
                        .iter()
                        .position(|n| n == r)
                        .ok_or_else(|| GroundError::UnknownRegion(r.clone()))?,
                }),
            }
        }
        g.pos.sort_unstable();
        g.pos.dedup();
        g.neg.sort_unstable();
        g.neg.dedup();
        Ok(g)
    }

    fn atoms(&self, a: &[GroundAtom]) -> Vec<usize> {
        let mut v: Vec<usize> = a.iter().map(|x| self.props[x]).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

fn build_region(decl: &crate::pddlx::RegionDecl) -> Result<Region, GroundError> {
    let r = match &decl.shape {
        RegionShape::Rect { x1, y1, x2, y2 } => Region::rect(&decl.name, *x1, *y1, *x2, *y2),
        RegionShape::Polygon(p) => Region::polygon(&decl.name, p),
    };
    r.map_err(|e| GroundError::BadRegion { name: decl.name.clone(), reason: e.to_string() })
}

pub fn ground(dom: &DomainDef, prob: &ProblemDef) -> Result<GroundedModel, GroundError> {
    ground_with_cap(dom, prob, DEFAULT_GROUNDING_CAP)
}

pub fn ground_with_cap(dom: &DomainDef, prob: &ProblemDef, cap: usize) -> Result<GroundedModel, GroundError> {
    if prob.domain != dom.name {
        return Err(GroundError::DomainMismatch { expected: dom.name.clone(), found: prob.domain.clone() });
    }
    let mut ctx = Ctx {
        dom,
        prob,
        props: BTreeSet::new(),
        fluents: BTreeSet::new(),
        region_names: prob.regions.iter().map(|r| r.name.clone()).collect(),
        flags_obstacle: &prob.obstacles,
        flags_objective: &prob.objectives,
    };

    let mut actions = Vec::new();
    for s in &dom.actions {
        for b in ctx.bindings(&s.object_params) {
            if let Some(p) = ctx.action(s, b) {
                actions.push(p);
                if actions.len() > cap {
                    return Err(GroundError::GroundingExplosion { cap });
                }
            }
        }
    }
    actions.reverse();
    let mut events = Vec::new();
    for s in &dom.events {
        for b in ctx.bindings(&s.object_params) {
            if let Some(p) = ctx.event(s, b) {
                events.push(p);
            }
        }
    }
    let goal = ctx.lift_conditions(&prob.goal, &Binding::new()).ok_or(GroundError::UnsatisfiableGoal)?;
    for p in actions.iter().chain(&events) {
        ctx.note(p);
    }
    let goal_pending = Pending {
        schema: String::new(),
        objects: Vec::new(),
        binding: Binding::new(),
        conds: goal,
        add: Vec::new(),
        del: Vec::new(),
        numeric: Vec::new(),
        slots: Vec::new(),
    };
    ctx.note(&goal_pending);
    ctx.props.extend(prob.init_props.iter().cloned());

    let propositions: Vec<GroundAtom> = ctx.props.iter().cloned().collect();
    let fluents: Vec<GroundFluent> = ctx.fluents.iter().cloned().collect();
    let prop_index: HashMap<GroundAtom, usize> = propositions.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect();
    let fluent_index: HashMap<GroundFluent, usize> = fluents.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect();
    let slots = dom.numeric_slots();
    let ctx_regions = ctx.region_names.clone();
    let ix = Indexer { props: &prop_index, fluents: &fluent_index, slots: &slots, regions: &ctx_regions };

    let mut values = Vec::with_capacity(fluents.len());
    for f in &fluents {
        match prob.fluent_value(f) {
            Some(v) => values.push(v),
            None => {
                let label = if f.args.is_empty() { f.name.clone() } else { format!("({} {})", f.name, f.args.join(" ")) };
                return Err(GroundError::UnassignedFluent(label));
            }
        }
    }
    let mut props = vec![-1i8; propositions.len()];
    for a in &prob.init_props {
        props[prop_index[a]] = 1;
    }

    let mut ground_actions = Vec::with_capacity(actions.len());
    for (index, p) in actions.iter().enumerate() {
        let mut numeric: Vec<GroundNumericEffect> = p
            .numeric
            .iter()
            .map(|(f, k, e)| GroundNumericEffect { fluent: fluent_index[f], kappa: *k, expr: ix.expr(e, &p.binding) })
            .collect();
        numeric.sort_by_key(|n| n.fluent);
        ground_actions.push(GroundAction {
            index,
            schema: p.schema.clone(),
            objects: p.objects.clone(),
            slots: p.slots.iter().map(|s| slots.iter().position(|t| t == s).expect("slot declared")).collect(),
            pre: ix.condition(&p.conds, &p.binding)?,
            add: ix.atoms(&p.add),
            del: ix.atoms(&p.del),
            numeric,
        });
    }
    let mut ground_events = Vec::with_capacity(events.len());
    for p in &events {
        ground_events.push(GroundEvent {
            schema: p.schema.clone(),
            objects: p.objects.clone(),
            pre: ix.condition(&p.conds, &p.binding)?,
            add: ix.atoms(&p.add),
            del: ix.atoms(&p.del),
        });
    }
    let goal = ix.condition(&goal_pending.conds, &Binding::new())?;

    let mut regions = Vec::with_capacity(prob.regions.len());
    for d in &prob.regions {
        let mut r = build_region(d)?;
        r.is_obstacle = prob.obstacles.contains(&d.name);
        r.is_objective = prob.objectives.contains(&d.name);
        regions.push(r);
    }

    let mut position_pairs = Vec::new();
    for c in ground_actions.iter().map(|a| &a.pre).chain(ground_events.iter().map(|e| &e.pre)).chain([&goal]) {
        for r in &c.regions {
            if !position_pairs.contains(&(r.x, r.y)) {
                position_pairs.push((r.x, r.y));
            }
        }
    }

    let (mut lower, mut upper) = (Vec::new(), Vec::new());
    for s in &slots {
        let b = prob.bound(s);
        lower.push(b.map_or(f64::NEG_INFINITY, |b| b.lower));
        upper.push(b.map_or(f64::INFINITY, |b| b.upper));
    }
    let action_index = ground_actions.iter().map(|a| (a.label(), a.index)).collect();

    Ok(GroundedModel {
        domain: dom.name.clone(),
        problem: prob.name.clone(),
        propositions,
        fluents,
        slots,
        lower,
        upper,
        actions: ground_actions,
        events: ground_events,
        goal,
        regions,
        position_pairs,
        init: InitialState { props, values },
        prop_index,
        fluent_index,
        action_index,
    })
}

/// Position of a pair in a value vector.
pub fn position(values: &[f64], pair: (usize, usize)) -> Point {
    Point::new(values[pair.0], values[pair.1])
}
