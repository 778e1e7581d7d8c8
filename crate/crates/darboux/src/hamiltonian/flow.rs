use num_traits::Signed;
use serde::Serialize;

use super::HamError;
use crate::geometry::{fmt_rat, neighborhood, serde_rat, to_f64, Aabb, Point, Rat};
use crate::par::Exec;

/// Radial profile equal to 1 up to `inner`, 0 from `outer` on, with a
/// quintic smoothstep in between (C² at both ends).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BumpProfile {
    #[serde(with = "serde_rat")]
    pub inner: Rat,
    #[serde(with = "serde_rat")]
    pub outer: Rat,
    #[serde(skip)]
    lo: f64,
    #[serde(skip)]
    hi: f64,
}

impl BumpProfile {
    pub fn new(inner: Rat, outer: Rat) -> Result<Self, HamError> {
        if !inner.is_positive() || inner >= outer {
            return Err(HamError::BadProfile(fmt_rat(&inner), fmt_rat(&outer)));
        }
        Ok(BumpProfile {
            inner,
            outer,
            lo: to_f64(&inner),
            hi: to_f64(&outer),
        })
    }

    pub fn value(&self, s: f64) -> f64 {
        if s <= self.lo {
            1.0
        } else if s >= self.hi {
            0.0
        } else {
            1.0 - smoothstep((s - self.lo) / (self.hi - self.lo))
        }
    }

    pub fn derivative(&self, s: f64) -> f64 {
        if s <= self.lo || s >= self.hi {
            0.0
        } else {
            let w = self.hi - self.lo;
            -smoothstep_deriv((s - self.lo) / w) / w
        }
    }
}

pub(crate) fn smoothstep(t: f64) -> f64 {
    t * t * t * (t * (6.0 * t - 15.0) + 10.0)
}

fn smoothstep_deriv(t: f64) -> f64 {
    30.0 * t * t * (t - 1.0) * (t - 1.0)
}

/// Compactly supported Hamiltonian whose time-1 map translates `K` by `q`.
///
/// `f` is a product of per-axis profiles of the excess distance outside the
/// hull `𝒦 = hull(K, K + q)`, so `f = 1` on `𝒦` and `f = 0` off the open
/// box `U = 𝒦 + margin`.
#[derive(Debug, Clone)]
pub struct TranslationField {
    pub q: Point,
    pub hull: Aabb,
    pub support: Aabb,
    pub profile: BumpProfile,
    qf: Vec<f64>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    margin: f64,
}

impl TranslationField {
    pub fn new(k: &Aabb, q: &Point, margin: Rat) -> Result<Self, HamError> {
        if k.dim() != q.dim() {
            return Err(HamError::Dimension(k.dim(), q.dim()));
        }
        if !margin.is_positive() {
            return Err(HamError::BadProfile(fmt_rat(&margin), fmt_rat(&margin)));
        }
        let hull = k.hull(&k.translate(q));
        let support = neighborhood(&hull, &margin).expect("positive margin");
        let one = Rat::from_integer(1);
        let (lo, hi) = hull.to_f64();
        Ok(TranslationField {
            q: q.clone(),
            profile: BumpProfile::new(one, one + margin)?,
            qf: q.to_f64(),
            lo,
            hi,
            margin: to_f64(&margin),
            hull,
            support,
        })
    }

    pub fn dim(&self) -> usize {
        self.qf.len()
    }

    fn excess(&self, m: usize, x: f64) -> (f64, f64) {
        if x < self.lo[m] {
            (self.lo[m] - x, -1.0)
        } else if x > self.hi[m] {
            (x - self.hi[m], 1.0)
        } else {
            (0.0, 0.0)
        }
    }

    /// Outside the open support box the field vanishes identically.
    pub fn outside_support(&self, z: &[f64]) -> bool {
        (0..self.dim()).any(|m| self.excess(m, z[m]).0 >= self.margin)
    }

    pub fn bump(&self, z: &[f64]) -> f64 {
        (0..self.dim())
            .map(|m| self.profile.value(1.0 + self.excess(m, z[m]).0))
            .product()
    }

    /// `w = -Jq` where `J(a, b) = (-b, a)` on each symplectic pair.
    fn w(&self) -> Vec<f64> {
        let mut w = vec![0.0; self.dim()];
        for p in (0..self.dim()).step_by(2) {
            w[p] = self.qf[p + 1];
            w[p + 1] = -self.qf[p];
        }
        w
    }

    pub fn hamiltonian(&self, z: &[f64]) -> f64 {
        let w = self.w();
        self.bump(z) * z.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>()
    }

    /// `X_H = J∇H`.
    pub fn vector_field(&self, z: &[f64]) -> Vec<f64> {
        let dim = self.dim();
        if self.outside_support(z) {
            return vec![0.0; dim];
        }
        let w = self.w();
        let g: f64 = z.iter().zip(&w).map(|(a, b)| a * b).sum();
        let vals: Vec<f64> = (0..dim).map(|m| self.profile.value(1.0 + self.excess(m, z[m]).0)).collect();
        let f: f64 = vals.iter().product();
        let mut grad = vec![0.0; dim];
        for m in 0..dim {
            let (e, sign) = self.excess(m, z[m]);
            let df_m = if sign == 0.0 {
                0.0
            } else {
                let others: f64 = (0..dim).filter(|&i| i != m).map(|i| vals[i]).product();
                others * self.profile.derivative(1.0 + e) * sign
            };
            grad[m] = df_m * g + f * w[m];
        }
        let mut x = vec![0.0; dim];
        for p in (0..dim).step_by(2) {
            x[p] = -grad[p + 1];
            x[p + 1] = grad[p];
        }
        x
    }

    fn rk4_step(&self, z: &[f64], h: f64) -> Vec<f64> {
        let add = |a: &[f64], b: &[f64], s: f64| -> Vec<f64> { a.iter().zip(b).map(|(x, y)| x + s * y).collect() };
        let k1 = self.vector_field(z);
        let k2 = self.vector_field(&add(z, &k1, h / 2.0));
        let k3 = self.vector_field(&add(z, &k2, h / 2.0));
        let k4 = self.vector_field(&add(z, &k3, h));
        (0..z.len())
            .map(|m| z[m] + h / 6.0 * (k1[m] + 2.0 * k2[m] + 2.0 * k3[m] + k4[m]))
            .collect()
    }

    pub fn trajectory(&self, z: &[f64], steps: usize) -> Vec<Vec<f64>> {
        let h = 1.0 / steps as f64;
        let mut out = vec![z.to_vec()];
        for _ in 0..steps {
            let next = self.rk4_step(out.last().expect("nonempty"), h);
            out.push(next);
        }
        out
    }
}

/// Time-1 point of the flow from `z` by fixed-step RK4.
pub fn translate_flow(field: &TranslationField, z: &[f64], steps: usize) -> Vec<f64> {
    assert!(steps >= 1, "at least one step");
    if field.outside_support(z) {
        return z.to_vec();
    }
    let h = 1.0 / steps as f64;
    let mut p = z.to_vec();
    for _ in 0..steps {
        p = field.rk4_step(&p, h);
    }
    p
}

/// Largest `|det Dφ - 1|` over a `grid^{2n}` lattice of probe points, with
/// the Jacobian of the time-1 map taken by central differences.
pub fn area_distortion_check(field: &TranslationField, probe: &Aabb, grid: usize, steps: usize, exec: Exec) -> f64 {
    assert!(grid >= 2, "grid must have at least two points per axis");
    let dim = field.dim();
    let (lo, hi) = probe.to_f64();
    let total = grid.pow(dim as u32);
    let h = 1e-5;
    let devs = exec.map_range(0..total, |idx| {
        let mut z = vec![0.0; dim];
        let mut rest = idx;
        for m in 0..dim {
            let i = rest % grid;
            rest /= grid;
            z[m] = lo[m] + (hi[m] - lo[m]) * i as f64 / (grid - 1) as f64;
        }
        let mut jac = vec![vec![0.0; dim]; dim];
        for c in 0..dim {
            let mut zp = z.clone();
            let mut zm = z.clone();
            zp[c] += h;
            zm[c] -= h;
            let a = translate_flow(field, &zp, steps);
            let b = translate_flow(field, &zm, steps);
            for r in 0..dim {
                jac[r][c] = (a[r] - b[r]) / (2.0 * h);
            }
        }
        (determinant(jac) - 1.0).abs()
    });
    devs.into_iter().fold(0.0, f64::max)
}

fn determinant(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n)
            .max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))
            .expect("nonempty");
        if a[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c];
        for r in c + 1..n {
            let factor = a[r][c] / a[c][c];
            for k in c..n {
                a[r][k] -= factor * a[c][k];
            }
        }
    }
    det
}
