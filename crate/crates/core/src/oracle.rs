//! Floating-point cross-checks that share nothing with the symbolic pipeline
//! except the input `HSpec`: the metric is re-evaluated numerically, derivatives
//! are central differences in double-double, the inverse is Gauss-Jordan, and holonomy is
//! measured by transporting a frame around a small coordinate loop.

use nalgebra::DMatrix;
use twofloat::TwoFloat as Dd;

use crate::error::{Error, Result};
use crate::metric::HSpec;
use crate::rational::to_f64;

/// Evaluation point with its differencing step and comparison tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatPoint {
    pub coords: Vec<f64>,
    pub step: f64,
    pub tolerance: f64,
}

impl FloatPoint {
    pub fn new(coords: Vec<f64>, step: f64, tolerance: f64) -> Result<Self> {
        if step.is_nan() || step <= 0.0 || tolerance.is_nan() || tolerance <= 0.0 {
            return Err(Error::Oracle(format!(
                "step ({step}) and tolerance ({tolerance}) must be positive"
            )));
        }
        Ok(FloatPoint {
            coords,
            step,
            tolerance,
        })
    }

    pub fn origin(dim: usize, step: f64, tolerance: f64) -> Result<Self> {
        Self::new(vec![0.0; dim], step, tolerance)
    }
}

/// Numeric `h` basis, `a[α][i][j]`.
///
/// The difference chain runs in double-double so that second differences at
/// small steps keep about ten significant digits.
struct NumericSpec {
    n: usize,
    a: Vec<Vec<Vec<f64>>>,
}

/// `1 / x` to double-double accuracy (one Newton step on the f64 quotient).
/// `TwoFloat`'s own division drops the low word of the residual.
fn recip(x: Dd) -> Dd {
    let r = Dd::new_div(1.0, x.hi());
    r + r * (1.0 - x * r)
}

impl NumericSpec {
    fn new(spec: &HSpec) -> Self {
        let n = spec.n();
        let a = spec
            .basis()
            .iter()
            .map(|m| {
                (0..n)
                    .map(|i| (0..n).map(|j| to_f64(&m[(i, j)])).collect())
                    .collect()
            })
            .collect();
        NumericSpec { n, a }
    }

    fn dim(&self) -> usize {
        self.n + 4
    }

    /// Row-major `g_{ab}`.
    fn metric(&self, x: &[Dd]) -> Vec<Dd> {
        let n = self.n;
        let dim = n + 4;
        let (p1, p2, q1, q2) = (0, 1, n + 2, n + 3);
        let t = x[q1];
        let zero = Dd::from(0.0);
        let one = Dd::from(1.0);
        let mut g = vec![zero; dim * dim];
        let mut set = |i: usize, j: usize, v: Dd| {
            g[i * dim + j] = v;
            g[j * dim + i] = v;
        };
        set(p1, q1, one);
        set(p2, q2, one);
        let mut f = zero;
        for i in 0..n {
            let xi = x[2 + i];
            f += xi * xi;
            set(2 + i, 2 + i, one);
            let mut u = zero;
            let mut tpow = one;
            for a in &self.a {
                tpow *= t;
                for j in 0..n {
                    if a[i][j] != 0.0 {
                        u += x[2 + j] * tpow * a[i][j];
                    }
                }
            }
            set(2 + i, q2, u);
        }
        set(q1, q1, f);
        set(q2, q2, f);
        g
    }

    fn inverse(&self, m: &[Dd], x: &[Dd]) -> Result<Vec<Dd>> {
        let dim = self.dim();
        let mut a = m.to_vec();
        let mut inv = vec![Dd::from(0.0); dim * dim];
        for i in 0..dim {
            inv[i * dim + i] = Dd::from(1.0);
        }
        for col in 0..dim {
            let pivot = (col..dim)
                .max_by(|&i, &j| {
                    a[i * dim + col]
                        .abs()
                        .hi()
                        .total_cmp(&a[j * dim + col].abs().hi())
                })
                .expect("nonempty range");
            if a[pivot * dim + col].hi().abs() < 1e-300 {
                let at: Vec<f64> = x.iter().map(|v| v.hi()).collect();
                return Err(Error::Oracle(format!(
                    "numeric metric is singular at {at:?}"
                )));
            }
            for k in 0..dim {
                a.swap(pivot * dim + k, col * dim + k);
                inv.swap(pivot * dim + k, col * dim + k);
            }
            let r = recip(a[col * dim + col]);
            for k in 0..dim {
                a[col * dim + k] *= r;
                inv[col * dim + k] *= r;
            }
            for row in 0..dim {
                let factor = a[row * dim + col];
                if row == col || factor == 0.0 {
                    continue;
                }
                for k in 0..dim {
                    let (ak, ik) = (a[col * dim + k], inv[col * dim + k]);
                    a[row * dim + k] -= factor * ak;
                    inv[row * dim + k] -= factor * ik;
                }
            }
        }
        Ok(inv)
    }

    fn christoffel(&self, x: &[Dd], h: f64, stencil: Stencil) -> Result<Vec<Dd>> {
        let dim = self.dim();
        let dg: Vec<Vec<Dd>> = (0..dim)
            .map(|e| stencil.derivative(x, e, h, |y| Ok(self.metric(y))))
            .collect::<Result<_>>()?;
        let ginv = self.inverse(&self.metric(x), x)?;
        let mut gamma = vec![Dd::from(0.0); dim * dim * dim];
        for a in 0..dim {
            for b in 0..dim {
                for c in 0..dim {
                    let mut s = Dd::from(0.0);
                    for d in 0..dim {
                        let gad = ginv[a * dim + d];
                        if gad != 0.0 {
                            s += gad
                                * (dg[b][d * dim + c] + dg[c][b * dim + d] - dg[d][b * dim + c]);
                        }
                    }
                    gamma[(a * dim + b) * dim + c] = s * 0.5;
                }
            }
        }
        Ok(gamma)
    }

    fn riemann(&self, x: &[Dd], h: f64, stencil: Stencil) -> Result<Vec<Dd>> {
        let dim = self.dim();
        let idx3 = |a: usize, b: usize, c: usize| (a * dim + b) * dim + c;
        let gamma = self.christoffel(x, h, stencil)?;
        let dgamma: Vec<Vec<Dd>> = (0..dim)
            .map(|e| stencil.derivative(x, e, h, |y| self.christoffel(y, h, stencil)))
            .collect::<Result<_>>()?;
        let mut r = vec![Dd::from(0.0); dim * dim * dim * dim];
        for a in 0..dim {
            for b in 0..dim {
                for c in 0..dim {
                    for d in 0..dim {
                        let mut v = dgamma[c][idx3(a, d, b)] - dgamma[d][idx3(a, c, b)];
                        for f in 0..dim {
                            v += gamma[idx3(a, c, f)] * gamma[idx3(f, d, b)]
                                - gamma[idx3(a, d, f)] * gamma[idx3(f, c, b)];
                        }
                        r[((a * dim + b) * dim + c) * dim + d] = v;
                    }
                }
            }
        }
        Ok(r)
    }
}

fn lift(x: &[f64]) -> Vec<Dd> {
    x.iter().map(|&v| Dd::from(v)).collect()
}

fn lower(x: Vec<Dd>) -> Vec<f64> {
    x.into_iter().map(f64::from).collect()
}

/// Central difference stencil.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Stencil {
    /// `(f(x+h) − f(x−h)) / 2h`, error `O(h²)`.
    Central3,
    /// `(f(x−2h) − 8f(x−h) + 8f(x+h) − f(x+2h)) / 12h`, error `O(h⁴)`.
    #[default]
    Central5,
}

impl Stencil {
    fn weights(self) -> &'static [(f64, f64)] {
        match self {
            Stencil::Central3 => &[(-1.0, -0.5), (1.0, 0.5)],
            Stencil::Central5 => &[
                (-2.0, 1.0 / 12.0),
                (-1.0, -8.0 / 12.0),
                (1.0, 8.0 / 12.0),
                (2.0, -1.0 / 12.0),
            ],
        }
    }

    fn derivative<F>(self, x: &[Dd], var: usize, h: f64, f: F) -> Result<Vec<Dd>>
    where
        F: Fn(&[Dd]) -> Result<Vec<Dd>>,
    {
        let inv_h = recip(Dd::from(h));
        let mut y = x.to_vec();
        let mut acc: Option<Vec<Dd>> = None;
        for &(offset, w) in self.weights() {
            y[var] = x[var] + offset * h;
            let scale = inv_h * w;
            let v = f(&y)?;
            match acc.as_mut() {
                None => acc = Some(v.into_iter().map(|e| e * scale).collect()),
                Some(a) => a.iter_mut().zip(v).for_each(|(s, e)| *s += e * scale),
            }
        }
        Ok(acc.unwrap_or_default())
    }
}

fn check_point(spec: &HSpec, p: &FloatPoint) -> Result<()> {
    if p.coords.len() != spec.n() + 4 {
        return Err(Error::PointLength {
            expected: spec.n() + 4,
            got: p.coords.len(),
        });
    }
    Ok(())
}

/// `Γ^a_{bc}` flattened as `(a * dim + b) * dim + c`.
pub fn fd_christoffel(spec: &HSpec, p: &FloatPoint) -> Result<Vec<f64>> {
    fd_christoffel_with(spec, p, Stencil::default())
}

pub fn fd_christoffel_with(spec: &HSpec, p: &FloatPoint, stencil: Stencil) -> Result<Vec<f64>> {
    check_point(spec, p)?;
    NumericSpec::new(spec)
        .christoffel(&lift(&p.coords), p.step, stencil)
        .map(lower)
}

/// `R^a_{bcd}` flattened as `((a * dim + b) * dim + c) * dim + d`, from
/// differences of [`fd_christoffel`] plus the quadratic terms.
pub fn fd_riemann(spec: &HSpec, p: &FloatPoint) -> Result<Vec<f64>> {
    fd_riemann_with(spec, p, Stencil::default())
}

pub fn fd_riemann_with(spec: &HSpec, p: &FloatPoint, stencil: Stencil) -> Result<Vec<f64>> {
    check_point(spec, p)?;
    NumericSpec::new(spec)
        .riemann(&lift(&p.coords), p.step, stencil)
        .map(lower)
}

/// Numeric metric at a point; exposed for cross-checks of the symbolic metric.
pub fn metric_at(spec: &HSpec, x: &[f64]) -> DMatrix<f64> {
    let dim = spec.n() + 4;
    DMatrix::from_row_slice(dim, dim, &lower(NumericSpec::new(spec).metric(&lift(x))))
}

/// `true` when `numeric` agrees with `exact`: relative error when
/// `|exact| ≥ 1e-3`, absolute error otherwise.
pub fn agrees(numeric: f64, exact: f64, tolerance: f64) -> bool {
    let err = (numeric - exact).abs();
    if exact.abs() >= 1e-3 {
        err <= tolerance * exact.abs()
    } else {
        err <= tolerance
    }
}

/// Error of the three-point curvature at steps `h` and `h/2`, taken on the
/// component with the largest error at `h`.
#[derive(Clone, Debug, PartialEq)]
pub struct Convergence {
    pub component: [usize; 4],
    pub error_h: f64,
    pub error_half: f64,
}

impl Convergence {
    pub fn ratio(&self) -> f64 {
        self.error_h / self.error_half
    }
}

/// `exact` is the flattened `R^a_{bcd}` at `coords`, laid out as in [`fd_riemann`].
pub fn fd_convergence(spec: &HSpec, coords: &[f64], h: f64, exact: &[f64]) -> Result<Convergence> {
    let coarse = fd_riemann_with(
        spec,
        &FloatPoint::new(coords.to_vec(), h, 1.0)?,
        Stencil::Central3,
    )?;
    let fine = fd_riemann_with(
        spec,
        &FloatPoint::new(coords.to_vec(), h / 2.0, 1.0)?,
        Stencil::Central3,
    )?;
    if exact.len() != coarse.len() {
        return Err(Error::Oracle(format!(
            "expected {} curvature components, got {}",
            coarse.len(),
            exact.len()
        )));
    }
    let (worst, error_h) = coarse
        .iter()
        .zip(exact)
        .map(|(a, e)| (a - e).abs())
        .enumerate()
        .fold(
            (0, 0.0),
            |best, (i, e)| if e > best.1 { (i, e) } else { best },
        );
    let dim = spec.n() + 4;
    Ok(Convergence {
        component: [
            worst / (dim * dim * dim),
            worst / (dim * dim) % dim,
            worst / dim % dim,
            worst % dim,
        ],
        error_h,
        error_half: (fine[worst] - exact[worst]).abs(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LoopSettings {
    /// Side of the square loop.
    pub eps: f64,
    /// RK4 steps per side.
    pub steps: usize,
    /// Differencing step for the Christoffel symbols along the path.
    pub fd_step: f64,
}

impl Default for LoopSettings {
    fn default() -> Self {
        LoopSettings {
            eps: 1e-3,
            steps: 100,
            fd_step: 1e-4,
        }
    }
}

/// Parallel transport of a frame around the square of side `eps` centred at
/// the origin in the `(c, d)` coordinate plane, traversed `+c, +d, −c, −d`.
///
/// Returns `(I − P) / eps²`. Transport along this orientation is
/// `I − eps² R(∂_c, ∂_d) + O(eps³)`, so the result approaches the matrix
/// `R^a_{b,c,d}` at the origin as `eps → 0`.
pub fn loop_transport(
    spec: &HSpec,
    plane: (usize, usize),
    settings: LoopSettings,
) -> Result<DMatrix<f64>> {
    let ns = NumericSpec::new(spec);
    let dim = ns.dim();
    let (c, d) = plane;
    if c >= dim || d >= dim || c == d {
        return Err(Error::Oracle(format!(
            "invalid plane ({}, {})",
            c + 1,
            d + 1
        )));
    }
    if settings.steps < 100 || settings.eps.is_nan() || settings.eps <= 0.0 {
        return Err(Error::Oracle(format!(
            "loop transport needs eps > 0 and at least 100 steps per side (got eps={}, steps={})",
            settings.eps, settings.steps
        )));
    }
    let eps = settings.eps;
    let half = 0.5 * eps;
    // dP/ds = -Γ(γ(s))[γ'(s)] P, with (Γ[v])^a_b = Γ^a_{eb} v^e
    let rhs = |x: &[f64], dir: usize, sign: f64, p: &DMatrix<f64>| -> Result<DMatrix<f64>> {
        let gamma = lower(ns.christoffel(&lift(x), settings.fd_step, Stencil::Central5)?);
        let mut conn = DMatrix::zeros(dim, dim);
        for a in 0..dim {
            for b in 0..dim {
                conn[(a, b)] = sign * gamma[(a * dim + dir) * dim + b];
            }
        }
        Ok(-(conn * p))
    };

    let mut p = DMatrix::<f64>::identity(dim, dim);
    let mut x = vec![0.0; dim];
    x[c] = -half;
    x[d] = -half;
    let legs = [(c, 1.0), (d, 1.0), (c, -1.0), (d, -1.0)];
    let ds = eps / settings.steps as f64;
    for &(dir, sign) in &legs {
        for _ in 0..settings.steps {
            let at = |t: f64| {
                let mut y = x.clone();
                y[dir] += sign * t;
                y
            };
            let k1 = rhs(&x, dir, sign, &p)?;
            let k2 = rhs(&at(0.5 * ds), dir, sign, &(&p + &k1 * (0.5 * ds)))?;
            let k3 = rhs(&at(0.5 * ds), dir, sign, &(&p + &k2 * (0.5 * ds)))?;
            let k4 = rhs(&at(ds), dir, sign, &(&p + &k3 * ds))?;
            p += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (ds / 6.0);
            x[dir] += sign * ds;
        }
    }
    if p.iter().any(|v| !v.is_finite()) {
        return Err(Error::Oracle(format!(
            "transport diverged in plane ({}, {}) with eps={eps}, steps={}",
            c + 1,
            d + 1,
            settings.steps
        )));
    }
    Ok((DMatrix::identity(dim, dim) - p) / (eps * eps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::RatMatrix;

    fn so2() -> HSpec {
        HSpec::new(2, vec![RatMatrix::from_ints(&[&[0, -1], &[1, 0]])]).unwrap()
    }

    fn at(coords: Vec<f64>) -> FloatPoint {
        FloatPoint::new(coords, 1e-4, 1e-6).unwrap()
    }

    #[test]
    fn reciprocal_keeps_low_word() {
        let third = recip(Dd::from(3.0));
        assert!(third.lo() != 0.0);
        let residual = third * 3.0 - 1.0;
        assert!(f64::from(residual).abs() < 1e-30, "{residual:?}");
    }

    #[test]
    fn rejects_bad_settings() {
        assert!(FloatPoint::new(vec![0.0; 6], 0.0, 1e-6).is_err());
        assert!(fd_christoffel(&so2(), &at(vec![0.0; 5])).is_err());
        let bad = LoopSettings {
            steps: 10,
            ..LoopSettings::default()
        };
        assert!(loop_transport(&so2(), (4, 5), bad).is_err());
    }

    #[test]
    fn christoffel_at_origin_and_off_origin() {
        let idx = |a: usize, b: usize, c: usize| (a * 6 + b) * 6 + c;
        let g0 = fd_christoffel(&so2(), &at(vec![0.0; 6])).unwrap();
        assert!(g0[idx(2, 3, 5)].abs() < 1e-9);
        let g1 = fd_christoffel(&so2(), &at(vec![0.0, 0.0, 0.0, 0.0, 1.0, 0.0])).unwrap();
        assert!((g1[idx(2, 3, 5)] + 1.0).abs() < 1e-6);
    }

    #[test]
    fn curvature_at_origin() {
        let idx = |a: usize, b: usize, c: usize, d: usize| ((a * 6 + b) * 6 + c) * 6 + d;
        let r = fd_riemann(&so2(), &at(vec![0.0; 6])).unwrap();
        assert!((r[idx(2, 3, 4, 5)] + 1.0).abs() < 1e-6);
        assert!((r[idx(0, 2, 2, 4)] - 1.0).abs() < 1e-6);
        let r = fd_riemann(&so2(), &at(vec![0.3, -0.2, 0.5, 0.25, -0.75, 0.5])).unwrap();
        for b in 0..6 {
            for c in 0..6 {
                for d in 0..6 {
                    assert!(r[idx(4, b, c, d)].abs() < 1e-6);
                    assert!(r[idx(5, b, c, d)].abs() < 1e-6);
                }
            }
        }
    }

    #[test]
    fn transport_in_rotation_plane() {
        let m = loop_transport(&so2(), (4, 5), LoopSettings::default()).unwrap();
        // middle block ≈ J
        assert!((m[(2, 3)] + 1.0).abs() < 5e-3);
        assert!((m[(3, 2)] - 1.0).abs() < 5e-3);
        let flat = loop_transport(&so2(), (0, 1), LoopSettings::default()).unwrap();
        assert!(flat.iter().all(|v| v.abs() < 5e-3));
    }
    #[test]
    fn three_point_error_is_second_order() {
        let mut basis = Vec::new();
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let mut m = RatMatrix::zeros(3, 3);
            m[(i, j)] = crate::rational::int(-1);
            m[(j, i)] = crate::rational::int(1);
            basis.push(m);
        }
        let spec = HSpec::new(3, basis).unwrap();
        let geo = crate::curvature::Geometry::build(&spec, 0).unwrap();
        let q: Vec<_> = [3, -5, 2, 7, -1, 6, -4]
            .iter()
            .map(|&k| crate::rational::rat(k, 8))
            .collect();
        let x: Vec<f64> = q.iter().map(to_f64).collect();
        let dim = 7;
        let mut exact = vec![0.0; dim * dim * dim * dim];
        for (key, p) in geo.curvature(0).nonzero() {
            let flat = key.iter().fold(0, |acc, &k| acc * dim + k as usize);
            exact[flat] = to_f64(&p.eval(&q).unwrap());
        }
        let conv = fd_convergence(&spec, &x, 1e-2, &exact).unwrap();
        assert!((3.0..5.0).contains(&conv.ratio()), "{conv:?}");
    }
}
