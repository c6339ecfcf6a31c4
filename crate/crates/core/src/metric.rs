//! The polynomial metric of signature `(2, n+2)` on `R^{n+4}` built from a
//! basis `A_1..A_N` of `h ⊂ so(n)`:
//!
//! ```text
//! g = 2 dx¹dx^{n+3} + 2 dx²dx^{n+4} + Σ (dx^î)² + 2 Σ u^î dx^î dx^{n+4}
//!     + f (dx^{n+3})² + f (dx^{n+4})²
//! u^î = A^î_{ĵα} x^ĵ (x^{n+3})^α,   f = Σ (x^î)²
//! ```
//!
//! The exponent of `x^{n+3}` is the position `α` of the basis element, so the
//! order of the basis matters for the metric (not for the holonomy algebra).

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::liealg::{gram_eta, Frame};
use crate::matrix::{Echelon, RatMatrix};
use crate::poly::{Monomial, Poly};
use crate::rational::{format_rational, Rational};

/// Input datum: `n` and an ordered basis of `h ⊂ so(n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HSpec {
    n: usize,
    basis: Vec<RatMatrix>,
}

impl HSpec {
    /// Validates skewness and linear independence of the basis.
    pub fn new(n: usize, basis: Vec<RatMatrix>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension("n must be at least 1".into()));
        }
        let mut echelon = Echelon::new(n * n);
        for (idx, a) in basis.iter().enumerate() {
            a.expect_size(n, n)
                .map_err(|e| Error::Input(format!("generator {}: {e}", idx + 1)))?;
            if let Some((i, j)) = a.is_skew() {
                return Err(Error::Input(format!(
                    "generator {} is not skew-symmetric: entry ({}, {}) is {} but ({}, {}) is {}",
                    idx + 1,
                    i + 1,
                    j + 1,
                    format_rational(&a[(i, j)]),
                    j + 1,
                    i + 1,
                    format_rational(&a[(j, i)]),
                )));
            }
            if !echelon.insert(a.flat().to_vec()) {
                return Err(Error::Input(format!(
                    "generator {} is linearly dependent on the preceding generators",
                    idx + 1
                )));
            }
        }
        Ok(HSpec { n, basis })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `N = dim h`.
    pub fn dim_h(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[RatMatrix] {
        &self.basis
    }

    pub fn frame(&self) -> Frame {
        Frame::new(self.n)
    }

    /// `A^î_{ĵα}` with 0-based middle indices `i, j` and 1-based `alpha`.
    pub fn entry(&self, i: usize, j: usize, alpha: usize) -> &Rational {
        &self.basis[alpha - 1][(i, j)]
    }

    /// `A_k`, or the zero matrix when `k` is outside `1..=N`.
    pub fn basis_or_zero(&self, k: usize) -> RatMatrix {
        if k >= 1 && k <= self.basis.len() {
            self.basis[k - 1].clone()
        } else {
            RatMatrix::zeros(self.n, self.n)
        }
    }

    /// Returns the first pair `(α, β)` (1-based) whose bracket leaves the span.
    pub fn closure_defect(&self) -> Option<(usize, usize)> {
        let mut echelon = Echelon::new(self.n * self.n);
        for a in &self.basis {
            echelon.insert(a.flat().to_vec());
        }
        for i in 0..self.basis.len() {
            for j in 0..i {
                let br = self.basis[i].commutator(&self.basis[j]).ok()?;
                if !echelon.contains(br.flat()) {
                    return Some((j + 1, i + 1));
                }
            }
        }
        None
    }

    /// Same `h` with the basis listed in a different order.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let basis = order.iter().map(|&k| self.basis[k].clone()).collect();
        HSpec::new(self.n, basis)
    }
}

/// Deliberate metric corruption for negative controls.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MetricOptions {
    /// Negate `u^î` for this 0-based middle index.
    pub flip_u: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct MetricField {
    pub n: usize,
    pub g: Vec<Vec<Poly>>,
    pub u: Vec<Poly>,
    pub f: Poly,
}

impl MetricField {
    pub fn dim(&self) -> usize {
        self.n + 4
    }

    pub fn nvars(&self) -> usize {
        self.n + 4
    }

    pub fn frame(&self) -> Frame {
        Frame::new(self.n)
    }

    pub fn entry(&self, a: usize, b: usize) -> &Poly {
        &self.g[a][b]
    }

    /// Matrix of constant terms.
    pub fn at_origin(&self) -> RatMatrix {
        let dim = self.dim();
        let mut m = RatMatrix::zeros(dim, dim);
        for a in 0..dim {
            for b in 0..dim {
                m[(a, b)] = self.g[a][b].eval_origin();
            }
        }
        m
    }

    pub fn max_degree(&self) -> u32 {
        self.g
            .iter()
            .flatten()
            .filter_map(Poly::degree)
            .max()
            .unwrap_or(0)
    }
}

/// `u^3..u^{n+2}` as polynomials in `x^1..x^{n+4}`.
pub fn build_u(spec: &HSpec) -> Vec<Poly> {
    let frame = spec.frame();
    let nvars = frame.dim();
    let q1 = frame.q1();
    (0..spec.n())
        .map(|i| {
            let mut u = Poly::zero(nvars);
            for alpha in 1..=spec.dim_h() {
                for j in 0..spec.n() {
                    let coeff = spec.entry(i, j, alpha);
                    if coeff.is_zero() {
                        continue;
                    }
                    let mut exps = vec![0u32; nvars];
                    exps[frame.e(j)] += 1;
                    exps[q1] += alpha as u32;
                    u += &Poly::term(Monomial::new(exps), coeff.clone());
                }
            }
            u
        })
        .collect()
}

pub fn build_metric(spec: &HSpec) -> MetricField {
    build_metric_with(spec, MetricOptions::default())
}

pub fn build_metric_with(spec: &HSpec, options: MetricOptions) -> MetricField {
    let frame = spec.frame();
    let dim = frame.dim();
    let nvars = dim;
    let mut u = build_u(spec);
    if let Some(i) = options.flip_u {
        if i < u.len() {
            u[i] = -&u[i];
        }
    }
    let mut f = Poly::zero(nvars);
    for a in frame.middle() {
        f += &Poly::var_pow(nvars, a, 2).expect("middle index in range");
    }

    let one = Poly::one(nvars);
    let mut g = vec![vec![Poly::zero(nvars); dim]; dim];
    let mut set = |a: usize, b: usize, p: &Poly| {
        g[a][b] = p.clone();
        g[b][a] = p.clone();
    };
    set(frame.p1(), frame.q1(), &one);
    set(frame.p2(), frame.q2(), &one);
    for (k, a) in frame.middle().enumerate() {
        set(a, a, &one);
        set(a, frame.q2(), &u[k]);
    }
    set(frame.q1(), frame.q1(), &f);
    set(frame.q2(), frame.q2(), &f);

    MetricField {
        n: spec.n(),
        g,
        u,
        f,
    }
}

/// Exact inverse of a polynomial matrix together with its (constant) determinant.
#[derive(Clone, Debug)]
pub struct PolyInverse {
    pub inverse: Vec<Vec<Poly>>,
    pub determinant: Rational,
}

/// Gauss-Jordan elimination over `Q[x]` using only nonzero constant pivots.
///
/// Succeeds exactly when such a pivot sequence exists, which is the case for
/// matrices with a constant nonzero determinant of the shape built here. The
/// determinant is the signed product of the pivots.
pub fn invert_poly_matrix(m: &[Vec<Poly>]) -> Result<PolyInverse> {
    let size = m.len();
    let nvars = m.first().and_then(|r| r.first()).map_or(0, Poly::nvars);
    let mut work: Vec<Vec<Poly>> = m.to_vec();
    let mut inv: Vec<Vec<Poly>> = (0..size)
        .map(|i| {
            (0..size)
                .map(|j| {
                    if i == j {
                        Poly::one(nvars)
                    } else {
                        Poly::zero(nvars)
                    }
                })
                .collect()
        })
        .collect();
    let mut det = Rational::one();

    for col in 0..size {
        let pivot_row = (col..size)
            .find(|&r| !work[r][col].is_zero() && work[r][col].is_constant())
            .ok_or_else(|| {
                Error::Consistency(format!(
                    "no constant pivot in column {} of the metric; determinant is not a nonzero constant",
                    col + 1
                ))
            })?;
        if pivot_row != col {
            work.swap(pivot_row, col);
            inv.swap(pivot_row, col);
            det = -det;
        }
        let pivot = work[col][col].constant_term();
        det *= &pivot;
        let scale = Rational::one() / &pivot;
        for j in 0..size {
            work[col][j] = work[col][j].scale(&scale);
            inv[col][j] = inv[col][j].scale(&scale);
        }
        for r in 0..size {
            if r == col || work[r][col].is_zero() {
                continue;
            }
            let factor = work[r][col].clone();
            for j in 0..size {
                if !work[col][j].is_zero() {
                    let delta = &factor * &work[col][j];
                    work[r][j] -= &delta;
                }
                if !inv[col][j].is_zero() {
                    let delta = &factor * &inv[col][j];
                    inv[r][j] -= &delta;
                }
            }
        }
    }
    Ok(PolyInverse {
        inverse: inv,
        determinant: det,
    })
}

pub fn invert_metric(m: &MetricField) -> Result<PolyInverse> {
    let out = invert_poly_matrix(&m.g)?;
    if out.determinant.is_zero() {
        return Err(Error::Consistency("metric determinant vanishes".into()));
    }
    Ok(out)
}

pub fn poly_matmul(a: &[Vec<Poly>], b: &[Vec<Poly>]) -> Vec<Vec<Poly>> {
    let size = a.len();
    let nvars = a[0][0].nvars();
    let mut out = vec![vec![Poly::zero(nvars); b[0].len()]; size];
    for i in 0..size {
        for k in 0..b.len() {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..b[0].len() {
                if !b[k][j].is_zero() {
                    out[i][j] += &(&a[i][k] * &b[k][j]);
                }
            }
        }
    }
    out
}

/// `g_0 = η` entrywise.
pub fn origin_is_eta(m: &MetricField) -> bool {
    m.at_origin() == gram_eta(m.n).gram
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn j2() -> RatMatrix {
        RatMatrix::from_ints(&[&[0, -1], &[1, 0]])
    }

    fn block(n: usize, blocks: &[(usize, i64)]) -> RatMatrix {
        let mut m = RatMatrix::zeros(n, n);
        for &(at, s) in blocks {
            m[(at, at + 1)] = int(-s);
            m[(at + 1, at)] = int(s);
        }
        m
    }

    fn p(text: &str, nvars: usize) -> Poly {
        Poly::parse(text, nvars).unwrap()
    }

    #[test]
    fn u_vanishes_for_trivial_h() {
        let spec = HSpec::new(3, vec![]).unwrap();
        assert!(build_u(&spec).iter().all(Poly::is_zero));
    }

    #[test]
    fn u_for_so2() {
        let spec = HSpec::new(2, vec![j2()]).unwrap();
        let u = build_u(&spec);
        assert_eq!(u[0], p("-1 * x4 * x5", 6));
        assert_eq!(u[1], p("1 * x3 * x5", 6));
    }

    #[test]
    fn u_for_two_commuting_rotations() {
        let spec = HSpec::new(4, vec![block(4, &[(0, 1)]), block(4, &[(2, 1)])]).unwrap();
        let u = build_u(&spec);
        // index-by-index: u^î = Σ_α Σ_ĵ A_α[î-2][ĵ-2] x^ĵ (x^7)^α
        let mut expected = vec![Poly::zero(8); 4];
        for (alpha, a) in spec.basis().iter().enumerate() {
            for i in 0..4 {
                for j in 0..4 {
                    let mono = &Poly::var(8, 2 + j).unwrap()
                        * &Poly::var_pow(8, 6, alpha as u32 + 1).unwrap();
                    expected[i] += &mono.scale(&a[(i, j)]);
                }
            }
        }
        assert_eq!(u, expected);
        assert_eq!(u[0], p("-1 * x4 * x7", 8));
        assert_eq!(u[2], p("-1 * x6 * x7^2", 8));
    }

    #[test]
    fn metric_without_h() {
        let spec = HSpec::new(1, vec![]).unwrap();
        let m = build_metric(&spec);
        let x3sq = p("1 * x3^2", 5);
        for a in 0..5 {
            for b in 0..5 {
                let expected = match (a.min(b), a.max(b)) {
                    (0, 3) | (1, 4) | (2, 2) => Poly::one(5),
                    (3, 3) | (4, 4) => x3sq.clone(),
                    _ => Poly::zero(5),
                };
                assert_eq!(m.g[a][b], expected, "entry ({}, {})", a + 1, b + 1);
            }
        }
    }

    #[test]
    fn metric_for_so2() {
        let spec = HSpec::new(2, vec![j2()]).unwrap();
        let m = build_metric(&spec);
        assert_eq!(m.g[2][5], p("-1 * x4 * x5", 6));
        assert_eq!(m.g[4][4], p("1 * x3^2 + 1 * x4^2", 6));
        assert!(origin_is_eta(&m));
        assert!(m.max_degree() <= 2);
    }

    #[test]
    fn inverse_without_h() {
        let spec = HSpec::new(1, vec![]).unwrap();
        let m = build_metric(&spec);
        let inv = invert_metric(&m).unwrap();
        // solved by hand from the 5x5 system
        assert_eq!(inv.inverse[0][0], p("-1 * x3^2", 5));
        assert_eq!(inv.inverse[0][3], Poly::one(5));
        assert_eq!(inv.determinant, int(1));
    }

    #[test]
    fn inverse_is_exact_and_eta_at_origin() {
        let spec = HSpec::new(2, vec![j2()]).unwrap();
        let m = build_metric(&spec);
        let inv = invert_metric(&m).unwrap();
        let prod = poly_matmul(&m.g, &inv.inverse);
        for (i, row) in prod.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                let expected = if i == j { Poly::one(6) } else { Poly::zero(6) };
                assert_eq!(e, &expected);
            }
        }
        let eta = gram_eta(2).gram;
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(inv.inverse[a][b].eval_origin(), eta[(a, b)]);
            }
        }
    }

    #[test]
    fn non_constant_determinant_is_rejected() {
        let x = Poly::var(2, 0).unwrap();
        let m = vec![
            vec![x.clone(), Poly::zero(2)],
            vec![Poly::zero(2), Poly::one(2)],
        ];
        assert!(matches!(invert_poly_matrix(&m), Err(Error::Consistency(_))));
    }

    #[test]
    fn spec_validation() {
        assert!(HSpec::new(2, vec![RatMatrix::identity(2)]).is_err());
        let err = HSpec::new(2, vec![j2(), j2().scale(&int(2))]).unwrap_err();
        assert!(err.to_string().contains("generator 2"));
        assert!(HSpec::new(0, vec![]).is_err());
        assert!(HSpec::new(3, vec![j2()]).is_err());
    }

    #[test]
    fn closure_of_h() {
        let e12 = block(3, &[(0, 1)]);
        let mut e23 = RatMatrix::zeros(3, 3);
        e23[(1, 2)] = int(-1);
        e23[(2, 1)] = int(1);
        let spec = HSpec::new(3, vec![e12, e23]).unwrap();
        assert!(spec.closure_defect().is_some());
    }
}
