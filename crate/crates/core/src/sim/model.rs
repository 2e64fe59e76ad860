//! Tables the scheme needs at run time, derived once from the scenario and
//! the auxiliary channel.

use rand::Rng;

use crate::dmc::joint::{assemble_joint, optimal_g, Estimator, Var};
use crate::dmc::model::{AuxChannel, DmcScenario};
use crate::error::{Error, Result};

/// Draws an index from a probability vector by inverse CDF.
pub fn draw<R: Rng + ?Sized>(p: &[f64], rng: &mut R) -> usize {
    let r: f64 = rng.random();
    let mut acc = 0.0;
    let mut last = 0;
    for (k, &q) in p.iter().enumerate() {
        if q > 0.0 {
            acc += q;
            last = k;
            if r < acc {
                return k;
            }
        }
    }
    last
}

#[derive(Debug, Clone)]
pub struct SchemeModel {
    pub ns: usize,
    pub nxi: usize,
    pub nu: usize,
    pub nv: usize,
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
    pub p_s: Vec<f64>,
    pub p_xi_given_s: Vec<Vec<f64>>,
    pub p_u: Vec<f64>,
    /// `[u][v]`
    pub p_v_given_u: Vec<Vec<f64>>,
    /// `[u][v][s]`, `-∞` where the likelihood is zero.
    pub log_p_s_given_uv: Vec<Vec<Vec<f64>>>,
    /// `[u][v][s][x]`; uniform where `(u, v, s)` has zero probability.
    pub p_x_given_uvs: Vec<Vec<Vec<Vec<f64>>>>,
    /// `[x][s]` flattened over `(y, z)`.
    pub p_yz_given_xs: Vec<Vec<Vec<f64>>>,
    /// `[u][v][s][z]`: `X` and `Y` summed out.
    pub p_z_given_uvs: Vec<Vec<Vec<Vec<f64>>>>,
    /// `[u][v][y]`, the typicality target.
    pub p_uvy: Vec<f64>,
    pub g: Estimator,
    /// Reconstruction from `y` alone, used when decoding fails.
    pub g_y: Vec<usize>,
    pub distortion: Vec<Vec<f64>>,
    /// `E[d(S, g(U, V, Y))]` of one symbol.
    pub expected_distortion: f64,
}

impl SchemeModel {
    pub fn new(sc: &DmcScenario, aux: &AuxChannel) -> Result<Self> {
        sc.validate()?;
        aux.validate(sc)?;
        let joint = assemble_joint(sc, aux)?;
        let a = sc.alphabets;
        let (ns, nu, nv, nx, ny, nz) = (a.s, aux.u, aux.v, a.x, a.y, a.z);
        if nu > u16::MAX as usize + 1 || nv > u16::MAX as usize + 1 {
            return Err(Error::CapExceeded {
                dimension: "auxiliary alphabet (codebook symbols are u16)".into(),
                size: nu.max(nv) as f64,
                cap: u16::MAX as f64 + 1.0,
            });
        }

        let p_u = joint.marginal(&[Var::U]);
        let p_uv = joint.marginal(&[Var::U, Var::V]);
        let p_v_given_u = (0..nu)
            .map(|u| {
                (0..nv)
                    .map(|v| if p_u[u] > 0.0 { p_uv[u * nv + v] / p_u[u] } else { 1.0 / nv as f64 })
                    .collect()
            })
            .collect();
        let p_uvs = joint.marginal(&[Var::U, Var::V, Var::S]);
        let log_p_s_given_uv = (0..nu)
            .map(|u| {
                (0..nv)
                    .map(|v| {
                        (0..ns)
                            .map(|s| {
                                let puv = p_uv[u * nv + v];
                                let q = if puv > 0.0 { p_uvs[(u * nv + v) * ns + s] / puv } else { 0.0 };
                                if q > 0.0 { q.ln() } else { f64::NEG_INFINITY }
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let p_x_given_uvs: Vec<Vec<Vec<Vec<f64>>>> = (0..nu)
            .map(|u| {
                (0..nv)
                    .map(|v| {
                        (0..ns)
                            .map(|s| {
                                let row = &aux.p_uvx_given_s[s][u][v];
                                let t: f64 = row.iter().sum();
                                if t > 0.0 {
                                    row.iter().map(|p| p / t).collect()
                                } else {
                                    vec![1.0 / nx as f64; nx]
                                }
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let p_yz_given_xs: Vec<Vec<Vec<f64>>> = sc
            .p_yz_given_xs
            .iter()
            .map(|by_s| by_s.iter().map(|t| t.iter().flatten().copied().collect()).collect())
            .collect();
        let p_z_given_uvs = (0..nu)
            .map(|u| {
                (0..nv)
                    .map(|v| {
                        (0..ns)
                            .map(|s| {
                                (0..nz)
                                    .map(|z| {
                                        (0..nx)
                                            .map(|x| {
                                                p_x_given_uvs[u][v][s][x]
                                                    * (0..ny).map(|y| p_yz_given_xs[x][s][y * nz + z]).sum::<f64>()
                                            })
                                            .sum()
                                    })
                                    .collect()
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let p_uvy = joint.marginal(&[Var::U, Var::V, Var::Y]);
        let g = optimal_g(&joint, &sc.distortion);
        let expected_distortion = crate::dmc::joint::expected_distortion(&joint, &sc.distortion, &g);
        let p_ys = joint.marginal(&[Var::Y, Var::S]);
        let g_y = (0..ny)
            .map(|y| {
                let mut best = (0, f64::INFINITY);
                for t in 0..a.s_hat {
                    let r: f64 = (0..ns).map(|s| p_ys[y * ns + s] * sc.distortion[s][t]).sum();
                    if r < best.1 {
                        best = (t, r);
                    }
                }
                best.0
            })
            .collect();
        Ok(Self {
            ns,
            nxi: a.xi,
            nu,
            nv,
            nx,
            ny,
            nz,
            p_s: sc.p_s.clone(),
            p_xi_given_s: sc.p_xi_given_s.clone(),
            p_u,
            p_v_given_u,
            log_p_s_given_uv,
            p_x_given_uvs,
            p_yz_given_xs,
            p_z_given_uvs,
            p_uvy,
            g,
            g_y,
            distortion: sc.distortion.clone(),
            expected_distortion,
        })
    }

    pub fn draw_state<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<usize> {
        (0..n).map(|_| draw(&self.p_s, rng)).collect()
    }
}
