//! Closed intervals over the extended reals.

use serde::Serialize;

use crate::grounder::GExpr;

/// Magnitude used in place of infinite parameter bounds.
pub const PARAM_CLIP: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

// 0 * inf is taken as 0
fn mul0(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        0.0
    } else {
        a * b
    }
}

impl Interval {
    pub const ENTIRE: Interval = Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY };

    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "[{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(v: f64) -> Self {
        Interval { lo: v, hi: v }
    }

    pub fn hull(self, o: Interval) -> Interval {
        Interval { lo: self.lo.min(o.lo), hi: self.hi.max(o.hi) }
    }

    pub fn is_subset_of(self, o: Interval) -> bool {
        o.lo <= self.lo && self.hi <= o.hi
    }

    pub fn contains(self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn midpoint(self) -> f64 {
        (self.lo + self.hi) / 2.0
    }

    /// Whether some value of `self` satisfies `lower <= v <= upper`
    /// (strict inequalities when `closed` is false).
    pub fn meets(self, lower: f64, upper: f64, closed: bool) -> bool {
        if closed {
            self.lo <= upper && self.hi >= lower && lower <= upper
        } else {
            self.lo < upper && self.hi > lower && lower < upper
        }
    }

    pub fn add(self, o: Interval) -> Interval {
        let lo = self.lo + o.lo;
        let hi = self.hi + o.hi;
        Interval {
            lo: if lo.is_nan() { f64::NEG_INFINITY } else { lo },
            hi: if hi.is_nan() { f64::INFINITY } else { hi },
        }
    }

    pub fn neg(self) -> Interval {
        Interval { lo: -self.hi, hi: -self.lo }
    }

    pub fn sub(self, o: Interval) -> Interval {
        self.add(o.neg())
    }

    pub fn mul(self, o: Interval) -> Interval {
        let c = [mul0(self.lo, o.lo), mul0(self.lo, o.hi), mul0(self.hi, o.lo), mul0(self.hi, o.hi)];
        Interval { lo: c.iter().copied().fold(f64::INFINITY, f64::min), hi: c.iter().copied().fold(f64::NEG_INFINITY, f64::max) }
    }

    pub fn recip(self) -> Interval {
        if self.contains(0.0) {
            return Interval::ENTIRE;
        }
        Interval { lo: 1.0 / self.hi, hi: 1.0 / self.lo }
    }

    pub fn div(self, o: Interval) -> Interval {
        self.mul(o.recip())
    }

    pub fn powi(self, n: i32) -> Interval {
        if n == 0 {
            return Interval::point(1.0);
        }
        if n < 0 {
            return self.powi(-n).recip();
        }
        let (a, b) = (self.lo.powi(n), self.hi.powi(n));
        if n % 2 == 1 {
            Interval { lo: a, hi: b }
        } else if self.contains(0.0) {
            Interval { lo: 0.0, hi: a.max(b) }
        } else {
            Interval { lo: a.min(b), hi: a.max(b) }
        }
    }

    pub fn sqrt(self) -> Interval {
        Interval { lo: self.lo.max(0.0).sqrt(), hi: self.hi.max(0.0).sqrt() }
    }
}

/// Parameter intervals from bounds, infinite ends clipped.
pub fn param_box(lower: &[f64], upper: &[f64]) -> Vec<Interval> {
    lower
        .iter()
        .zip(upper)
        .map(|(&l, &u)| Interval::new(l.max(-PARAM_CLIP), u.min(PARAM_CLIP)))
        .collect()
}

pub fn eval_interval(e: &GExpr, vars: &[Interval], params: &[Interval]) -> Interval {
    match e {
        GExpr::Const(c) => Interval::point(*c),
        GExpr::Fluent(k) => vars[*k],
        GExpr::Param(j) => params[*j],
        GExpr::Add(a, b) => eval_interval(a, vars, params).add(eval_interval(b, vars, params)),
        GExpr::Sub(a, b) => eval_interval(a, vars, params).sub(eval_interval(b, vars, params)),
        GExpr::Mul(a, b) => eval_interval(a, vars, params).mul(eval_interval(b, vars, params)),
        GExpr::Div(a, b) => eval_interval(a, vars, params).div(eval_interval(b, vars, params)),
        GExpr::Neg(a) => eval_interval(a, vars, params).neg(),
        GExpr::Pow(a, n) => eval_interval(a, vars, params).powi(*n),
        GExpr::Sqrt(a) => eval_interval(a, vars, params).sqrt(),
    }
}
