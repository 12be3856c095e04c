use serde::Serialize;

/// Handle to a recorded node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Var(pub usize);

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Op {
    Const,
    /// Flat index into the parameter grid.
    Input(usize),
    Add(Var, Var),
    Sub(Var, Var),
    Mul(Var, Var),
    Div(Var, Var),
    Neg(Var),
    Powi(Var, i32),
    Sqrt(Var),
    Relu(Var),
    /// Euclidean norm of the operands; its gradient at the origin is taken as zero.
    Norm2(Vec<Var>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Node {
    pub op: Op,
    pub value: f64,
}

/// Append-only record of scalar operations. Inputs always precede their users.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Tape {
    nodes: Vec<Node>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("non-finite adjoint at tape node {node}")]
pub struct GradientFault {
    pub node: usize,
}

impl Tape {
    pub fn new() -> Self {
        Tape::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn value(&self, v: Var) -> f64 {
        self.nodes[v.0].value
    }

    fn push(&mut self, op: Op, value: f64) -> Var {
        self.nodes.push(Node { op, value });
        Var(self.nodes.len() - 1)
    }

    pub fn constant(&mut self, c: f64) -> Var {
        self.push(Op::Const, c)
    }

    pub fn input(&mut self, index: usize, value: f64) -> Var {
        self.push(Op::Input(index), value)
    }

    pub fn add(&mut self, a: Var, b: Var) -> Var {
        let v = self.value(a) + self.value(b);
        self.push(Op::Add(a, b), v)
    }

    pub fn sub(&mut self, a: Var, b: Var) -> Var {
        let v = self.value(a) - self.value(b);
        self.push(Op::Sub(a, b), v)
    }

    pub fn mul(&mut self, a: Var, b: Var) -> Var {
        let v = self.value(a) * self.value(b);
        self.push(Op::Mul(a, b), v)
    }

    pub fn div(&mut self, a: Var, b: Var) -> Var {
        let v = self.value(a) / self.value(b);
        self.push(Op::Div(a, b), v)
    }

    pub fn neg(&mut self, a: Var) -> Var {
        let v = -self.value(a);
        self.push(Op::Neg(a), v)
    }

    pub fn powi(&mut self, a: Var, n: i32) -> Var {
        let v = self.value(a).powi(n);
        self.push(Op::Powi(a, n), v)
    }

    pub fn sqrt(&mut self, a: Var) -> Var {
        let v = self.value(a).sqrt();
        self.push(Op::Sqrt(a), v)
    }

    pub fn relu(&mut self, a: Var) -> Var {
        let v = self.value(a).max(0.0);
        self.push(Op::Relu(a), v)
    }

    pub fn norm2(&mut self, xs: &[Var]) -> Var {
        let v = xs.iter().map(|&x| self.value(x) * self.value(x)).sum::<f64>().sqrt();
        self.push(Op::Norm2(xs.to_vec()), v)
    }

    /// Sum of `xs`, or a zero constant when empty.
    pub fn sum(&mut self, xs: &[Var]) -> Var {
        let Some((&first, rest)) = xs.split_first() else {
            return self.constant(0.0);
        };
        rest.iter().fold(first, |acc, &x| self.add(acc, x))
    }

    pub fn scale(&mut self, k: f64, a: Var) -> Var {
        let c = self.constant(k);
        self.mul(c, a)
    }

    /// `sqrt(sum(x^2) + eps)`, smooth at the origin.
    pub fn smooth_norm(&mut self, xs: &[Var], eps: f64) -> Var {
        let sq: Vec<Var> = xs.iter().map(|&x| self.mul(x, x)).collect();
        let mut acc = self.constant(eps);
        for s in sq {
            acc = self.add(acc, s);
        }
        self.sqrt(acc)
    }

    /// Adjoints of every node with respect to `root`.
    pub fn adjoints(&self, root: Var) -> Result<Vec<f64>, GradientFault> {
        let mut adj = vec![0.0_f64; root.0 + 1];
        adj[root.0] = 1.0;
        for i in (0..=root.0).rev() {
            let g = adj[i];
            if g == 0.0 {
                continue;
            }
            if !g.is_finite() {
                return Err(GradientFault { node: i });
            }
            let val = |v: Var| self.nodes[v.0].value;
            match &self.nodes[i].op {
                Op::Const | Op::Input(_) => {}
                Op::Add(a, b) => {
                    adj[a.0] += g;
                    adj[b.0] += g;
                }
                Op::Sub(a, b) => {
                    adj[a.0] += g;
                    adj[b.0] -= g;
                }
                Op::Mul(a, b) => {
                    let (va, vb) = (val(*a), val(*b));
                    adj[a.0] += g * vb;
                    adj[b.0] += g * va;
                }
                Op::Div(a, b) => {
                    let (va, vb) = (val(*a), val(*b));
                    adj[a.0] += g / vb;
                    adj[b.0] -= g * va / (vb * vb);
                }
                Op::Neg(a) => adj[a.0] -= g,
                Op::Powi(a, n) => {
                    if *n != 0 {
                        adj[a.0] += g * f64::from(*n) * val(*a).powi(n - 1);
                    }
                }
                Op::Sqrt(a) => adj[a.0] += g * 0.5 / self.nodes[i].value,
                Op::Relu(a) => {
                    if val(*a) > 0.0 {
                        adj[a.0] += g;
                    }
                }
                Op::Norm2(xs) => {
                    let n = self.nodes[i].value;
                    if n > 0.0 {
                        for x in xs {
                            adj[x.0] += g * val(*x) / n;
                        }
                    }
                }
            }
        }
        Ok(adj)
    }

    /// Gradient of `root` with respect to the inputs, as a dense vector of `len`.
    pub fn gradient(&self, root: Var, len: usize) -> Result<Vec<f64>, GradientFault> {
        let adj = self.adjoints(root)?;
        let mut grad = vec![0.0; len];
        for (i, node) in self.nodes.iter().enumerate().take(adj.len()) {
            if let Op::Input(j) = node.op {
                grad[j] += adj[i];
            }
        }
        if let Some(j) = grad.iter().position(|g| !g.is_finite()) {
            return Err(GradientFault { node: j });
        }
        Ok(grad)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cost_gradient() {
        let mut t = Tape::new();
        let a = t.input(0, 3.0);
        let b = t.input(1, 4.0);
        let c = t.input(2, 1.0);
        let dx = t.mul(a, c);
        let dy = t.mul(b, c);
        let psi = t.norm2(&[dx, dy]);
        let g = t.gradient(psi, 3).unwrap();
        assert!((g[0] - 0.6).abs() < 1e-15);
        assert!((g[1] - 0.8).abs() < 1e-15);
        assert!((g[2] - 5.0).abs() < 1e-15);
    }

    #[test]
    fn norm_at_origin_has_zero_gradient() {
        let mut t = Tape::new();
        let a = t.input(0, 0.0);
        let n = t.norm2(&[a]);
        assert_eq!(t.gradient(n, 1).unwrap(), vec![0.0]);
    }

    #[test]
    fn division_and_powers() {
        let mut t = Tape::new();
        let a = t.input(0, 2.0);
        let b = t.input(1, 3.0);
        let q = t.div(a, b);
        let p = t.powi(q, 3);
        let g = t.gradient(p, 2).unwrap();
        // d/da (a/b)^3 = 3 a^2 / b^3, d/db = -3 a^3 / b^4
        assert!((g[0] - 12.0 / 27.0).abs() < 1e-14);
        assert!((g[1] + 24.0 / 81.0).abs() < 1e-14);
    }

    #[test]
    fn non_finite_adjoint() {
        let mut t = Tape::new();
        let a = t.input(0, 0.0);
        let s = t.sqrt(a);
        assert!(t.gradient(s, 1).is_err());
    }
}
