//! Dense joint table over `(S, Ξ, U, V, X, Y, Z)` and the quantities read
//! off it.

use crate::dmc::model::{AuxChannel, DmcScenario};
use crate::error::{Error, Result};

/// Coordinates of the joint table, in storage order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    S = 0,
    Xi = 1,
    U = 2,
    V = 3,
    X = 4,
    Y = 5,
    Z = 6,
}

impl Var {
    pub const ALL: [Var; 7] = [Var::S, Var::Xi, Var::U, Var::V, Var::X, Var::Y, Var::Z];

    pub fn name(self) -> &'static str {
        match self {
            Var::S => "S",
            Var::Xi => "Xi",
            Var::U => "U",
            Var::V => "V",
            Var::X => "X",
            Var::Y => "Y",
            Var::Z => "Z",
        }
    }
}

/// Default cap on the number of joint-table entries.
pub const JOINT_CAP: usize = 10_000_000;

/// Row-major table `p[s][xi][u][v][x][y][z]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Joint {
    dims: [usize; 7],
    p: Vec<f64>,
}

/// Number of entries the joint of `sc` and `aux` would have.
pub fn joint_size(sc: &DmcScenario, aux: &AuxChannel) -> f64 {
    let a = &sc.alphabets;
    [a.s, a.xi, aux.u, aux.v, a.x, a.y, a.z]
        .iter()
        .map(|&n| n as f64)
        .product()
}

/// `P_S P_{Ξ|S} P_{UVX|S} P_{YZ|XS}` as one table. Shapes must already agree;
/// use [`DmcScenario::validate`] and [`AuxChannel::validate`] for the
/// simplex checks.
pub fn assemble_joint(sc: &DmcScenario, aux: &AuxChannel) -> Result<Joint> {
    let a = &sc.alphabets;
    let size = joint_size(sc, aux);
    if size > JOINT_CAP as f64 {
        return Err(Error::CapExceeded {
            dimension: "joint table entries".into(),
            size,
            cap: JOINT_CAP as f64,
        });
    }
    if aux.p_uvx_given_s.len() != a.s
        || aux.p_uvx_given_s.iter().flatten().flatten().any(|r| r.len() != a.x)
    {
        return Err(Error::AlphabetMismatch(format!(
            "auxiliary table must be indexed [s < {}][u][v][x < {}]",
            a.s, a.x
        )));
    }
    let dims = [a.s, a.xi, aux.u, aux.v, a.x, a.y, a.z];
    let mut p = Vec::with_capacity(size as usize);
    for s in 0..a.s {
        for xi in 0..a.xi {
            let ps = sc.p_s[s] * sc.p_xi_given_s[s][xi];
            for u in 0..aux.u {
                for v in 0..aux.v {
                    for x in 0..a.x {
                        let pa = ps * aux.p_uvx_given_s[s][u][v][x];
                        for y in 0..a.y {
                            for z in 0..a.z {
                                p.push(pa * sc.p_yz_given_xs[x][s][y][z]);
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(Joint { dims, p })
}

impl Joint {
    pub fn dims(&self) -> [usize; 7] {
        self.dims
    }

    pub fn dim(&self, v: Var) -> usize {
        self.dims[v as usize]
    }

    pub fn table(&self) -> &[f64] {
        &self.p
    }

    /// Probability of one full index tuple.
    pub fn get(&self, idx: [usize; 7]) -> f64 {
        let mut k = 0;
        for (i, &n) in idx.iter().zip(&self.dims) {
            k = k * n + i;
        }
        self.p[k]
    }

    /// Marginal over `vars`, row-major in the order given.
    pub fn marginal(&self, vars: &[Var]) -> Vec<f64> {
        let mut stride = [0usize; 7];
        let mut m = 1;
        for &v in vars.iter().rev() {
            stride[v as usize] = m;
            m *= self.dims[v as usize];
        }
        let mut out = vec![0.0; m];
        let mut idx = [0usize; 7];
        let mut k = 0usize;
        for &p in &self.p {
            out[k] += p;
            // odometer step, keeping the marginal index in sync
            for c in (0..7).rev() {
                idx[c] += 1;
                k += stride[c];
                if idx[c] < self.dims[c] {
                    break;
                }
                k -= stride[c] * idx[c];
                idx[c] = 0;
            }
        }
        out
    }

    /// Entropy of the marginal over `vars`, in nats.
    pub fn entropy(&self, vars: &[Var]) -> f64 {
        if vars.is_empty() {
            return 0.0;
        }
        self.marginal(vars)
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| -p * p.ln())
            .sum()
    }

    /// `I(A;B|C)` in nats, from the entropies of the exact table, clamped at 0.
    pub fn info(&self, a: &[Var], b: &[Var], c: &[Var]) -> Result<f64> {
        for (x, y) in [(a, b), (a, c), (b, c)] {
            if let Some(v) = x.iter().find(|v| y.contains(v)) {
                return Err(Error::OverlappingSets(v.name().into()));
            }
        }
        if a.is_empty() || b.is_empty() {
            return Ok(0.0);
        }
        let cat = |x: &[Var], y: &[Var]| [x, y].concat();
        let ac = cat(a, c);
        let bc = cat(b, c);
        let abc = cat(&ac, b);
        let i = self.entropy(&ac) + self.entropy(&bc) - self.entropy(&abc) - self.entropy(c);
        Ok(i.max(0.0))
    }

    /// `I(Ξ; U, Z)`; the secret part of the state must be independent of
    /// `(U, Z)`.
    pub fn independence_residual(&self) -> f64 {
        self.info(&[Var::Xi], &[Var::U, Var::Z], &[])
            .expect("disjoint by construction")
    }
}

/// Reconstruction map `ŝ(u, v, y)`, flat in `[u][v][y]` order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Estimator {
    pub dims: [usize; 3],
    pub map: Vec<usize>,
}

impl Estimator {
    pub fn at(&self, u: usize, v: usize, y: usize) -> usize {
        self.map[(u * self.dims[1] + v) * self.dims[2] + y]
    }

    /// Same reconstruction symbol everywhere.
    pub fn constant(dims: [usize; 3], s_hat: usize) -> Self {
        Self {
            dims,
            map: vec![s_hat; dims.iter().product()],
        }
    }
}

/// Posterior-optimal `g`: for each `(u, v, y)` the `ŝ` minimizing
/// `Σ_s P(s, u, v, y) d(s, ŝ)`. Ties go to the smallest index, and
/// zero-probability cells map to symbol 0.
pub fn optimal_g(joint: &Joint, distortion: &[Vec<f64>]) -> Estimator {
    let (ns, nu, nv, ny) = (
        joint.dim(Var::S),
        joint.dim(Var::U),
        joint.dim(Var::V),
        joint.dim(Var::Y),
    );
    let n_hat = distortion.first().map_or(1, |r| r.len());
    let m = joint.marginal(&[Var::U, Var::V, Var::Y, Var::S]);
    let cells = nu * nv * ny;
    let map = (0..cells)
        .map(|c| {
            let post = &m[c * ns..(c + 1) * ns];
            if post.iter().all(|&p| p <= 0.0) {
                return 0;
            }
            let mut best = (0, f64::INFINITY);
            for t in 0..n_hat {
                let risk: f64 = (0..ns).map(|s| post[s] * distortion[s][t]).sum();
                if risk < best.1 {
                    best = (t, risk);
                }
            }
            best.0
        })
        .collect();
    Estimator {
        dims: [nu, nv, ny],
        map,
    }
}

/// `E[d(S, g(U, V, Y))]` under the joint.
pub fn expected_distortion(joint: &Joint, distortion: &[Vec<f64>], g: &Estimator) -> f64 {
    let ns = joint.dim(Var::S);
    let m = joint.marginal(&[Var::U, Var::V, Var::Y, Var::S]);
    m.iter()
        .enumerate()
        .filter(|(_, &p)| p > 0.0)
        .map(|(k, &p)| p * distortion[k % ns][g.map[k / ns]])
        .sum()
}
