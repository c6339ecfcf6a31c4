//! Exact matrix Lie algebra toolkit for `so(2, n+2)`.
//!
//! Coordinates are identified with the basis `p1, p2, e1..en, q1, q2` in that
//! order (see [`Frame`]). All indices in this module are 0-based; error
//! messages report 1-based positions.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{Echelon, RatMatrix};
use crate::rational::Rational;

/// Index bookkeeping for the frozen basis `p1, p2, e1..en, q1, q2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Frame {
    pub n: usize,
}

impl Frame {
    pub fn new(n: usize) -> Self {
        Frame { n }
    }

    /// Ambient dimension `n + 4`.
    pub fn dim(&self) -> usize {
        self.n + 4
    }

    pub fn p1(&self) -> usize {
        0
    }

    pub fn p2(&self) -> usize {
        1
    }

    /// Coordinate of `e_{k+1}`.
    pub fn e(&self, k: usize) -> usize {
        2 + k
    }

    pub fn q1(&self) -> usize {
        self.n + 2
    }

    pub fn q2(&self) -> usize {
        self.n + 3
    }

    pub fn middle(&self) -> std::ops::Range<usize> {
        2..self.n + 2
    }

    pub fn is_middle(&self, a: usize) -> bool {
        (2..self.n + 2).contains(&a)
    }
}

/// Gram matrix of the form of signature `(2, n+2)` in the basis `p1, p2, e, q1, q2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaForm {
    pub n: usize,
    pub gram: RatMatrix,
}

impl EtaForm {
    pub fn frame(&self) -> Frame {
        Frame::new(self.n)
    }

    pub fn dim(&self) -> usize {
        self.n + 4
    }

    /// `η(v, w)`.
    pub fn pair(&self, v: &[Rational], w: &[Rational]) -> Rational {
        let gw = self.gram.mul_vec(w);
        v.iter()
            .zip(&gw)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }
}

pub fn gram_eta(n: usize) -> EtaForm {
    let frame = Frame::new(n);
    let mut gram = RatMatrix::zeros(frame.dim(), frame.dim());
    gram[(frame.p1(), frame.q1())] = Rational::one();
    gram[(frame.q1(), frame.p1())] = Rational::one();
    gram[(frame.p2(), frame.q2())] = Rational::one();
    gram[(frame.q2(), frame.p2())] = Rational::one();
    for a in frame.middle() {
        gram[(a, a)] = Rational::one();
    }
    EtaForm { n, gram }
}

/// `true` iff `Mᵗ η + η M = 0`.
pub fn so_check(m: &RatMatrix, eta: &EtaForm) -> Result<bool> {
    m.expect_size(eta.dim(), eta.dim())?;
    let lhs = m.transpose().checked_mul(&eta.gram)?;
    let rhs = eta.gram.checked_mul(m)?;
    Ok(lhs.checked_add(&rhs)?.is_zero())
}

/// Element of the stabilizer of `span{p1, p2}`, parametrized by `(B, A, X, Y, c)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParabolicElement {
    pub b: RatMatrix,
    pub a: RatMatrix,
    pub x: Vec<Rational>,
    pub y: Vec<Rational>,
    pub c: Rational,
}

/// Element of `g^h`: the stabilizer pattern with `B = 0` and `A ∈ h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GhElement {
    pub a: RatMatrix,
    pub x: Vec<Rational>,
    pub y: Vec<Rational>,
    pub c: Rational,
}

impl GhElement {
    pub fn zero(n: usize) -> Self {
        GhElement {
            a: RatMatrix::zeros(n, n),
            x: vec![Rational::zero(); n],
            y: vec![Rational::zero(); n],
            c: Rational::zero(),
        }
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }
}

impl ParabolicElement {
    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn to_matrix(&self) -> Result<RatMatrix> {
        let n = self.n();
        self.a.expect_size(n, n)?;
        self.b.expect_size(2, 2)?;
        if self.y.len() != n {
            return Err(Error::InvalidDimension(format!(
                "X has length {n} but Y has length {}",
                self.y.len()
            )));
        }
        if let Some((i, j)) = self.a.is_skew() {
            return Err(Error::NotSkew {
                row: i + 1,
                col: j + 1,
            });
        }
        let f = Frame::new(n);
        let mut m = RatMatrix::zeros(f.dim(), f.dim());
        for i in 0..2 {
            for j in 0..2 {
                m[(i, j)] = self.b[(i, j)].clone();
                // lower-right block is -Bᵗ
                m[(f.q1() + i, f.q1() + j)] = -self.b[(j, i)].clone();
            }
        }
        for k in 0..n {
            m[(f.p1(), f.e(k))] = -self.x[k].clone();
            m[(f.p2(), f.e(k))] = -self.y[k].clone();
            m[(f.e(k), f.q1())] = self.x[k].clone();
            m[(f.e(k), f.q2())] = self.y[k].clone();
            for l in 0..n {
                m[(f.e(k), f.e(l))] = self.a[(k, l)].clone();
            }
        }
        m[(f.p1(), f.q2())] = -self.c.clone();
        m[(f.p2(), f.q1())] = self.c.clone();
        Ok(m)
    }
}

/// Matrix of a `g^h` element in the basis `p1, p2, e, q1, q2`.
pub fn embed_gh(e: &GhElement) -> Result<RatMatrix> {
    ParabolicElement {
        b: RatMatrix::zeros(2, 2),
        a: e.a.clone(),
        x: e.x.clone(),
        y: e.y.clone(),
        c: e.c.clone(),
    }
    .to_matrix()
}

/// Membership test for the stabilizer of `span{p1, p2}`: recovers
/// `(B, A, X, Y, c)` or names the first entry that breaks the pattern.
pub fn decompose_parabolic(m: &RatMatrix) -> Result<ParabolicElement> {
    if !m.is_square() || m.rows() < 4 {
        return Err(Error::InvalidDimension(format!(
            "expected an (n+4)x(n+4) matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows() - 4;
    let f = Frame::new(n);
    let fail = |row: usize, col: usize, reason: &'static str| Error::NotInStabilizer {
        row: row + 1,
        col: col + 1,
        reason,
    };

    let mut b = RatMatrix::zeros(2, 2);
    for i in 0..2 {
        for j in 0..2 {
            b[(i, j)] = m[(i, j)].clone();
        }
    }
    let mut a = RatMatrix::zeros(n, n);
    let mut x = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    for k in 0..n {
        x.push(m[(f.e(k), f.q1())].clone());
        y.push(m[(f.e(k), f.q2())].clone());
        for l in 0..n {
            a[(k, l)] = m[(f.e(k), f.e(l))].clone();
        }
    }
    let c = m[(f.p2(), f.q1())].clone();

    for k in 0..n {
        for col in [f.p1(), f.p2()] {
            if !m[(f.e(k), col)].is_zero() {
                return Err(fail(
                    f.e(k),
                    col,
                    "must vanish (e-rows have no p-component)",
                ));
            }
        }
        if m[(f.p1(), f.e(k))] != -x[k].clone() {
            return Err(fail(f.p1(), f.e(k), "must equal -X"));
        }
        if m[(f.p2(), f.e(k))] != -y[k].clone() {
            return Err(fail(f.p2(), f.e(k), "must equal -Y"));
        }
    }
    if !m[(f.p1(), f.q1())].is_zero() {
        return Err(fail(f.p1(), f.q1(), "must vanish"));
    }
    if !m[(f.p2(), f.q2())].is_zero() {
        return Err(fail(f.p2(), f.q2(), "must vanish"));
    }
    if m[(f.p1(), f.q2())] != -c.clone() {
        return Err(fail(f.p1(), f.q2(), "must equal -c"));
    }
    for row in [f.q1(), f.q2()] {
        for col in 0..f.q1() {
            if !m[(row, col)].is_zero() {
                return Err(fail(row, col, "must vanish (q-rows only carry -Bᵗ)"));
            }
        }
        for (j, col) in [f.q1(), f.q2()].into_iter().enumerate() {
            let i = row - f.q1();
            if m[(row, col)] != -b[(j, i)].clone() {
                return Err(fail(row, col, "must equal -Bᵗ"));
            }
        }
    }
    if let Some((i, j)) = a.is_skew() {
        return Err(fail(f.e(i), f.e(j), "A-block must be skew-symmetric"));
    }
    Ok(ParabolicElement { b, a, x, y, c })
}

/// The `so(n)` component of a stabilizer element.
pub fn pr_so_n(m: &RatMatrix) -> Result<RatMatrix> {
    Ok(decompose_parabolic(m)?.a)
}

pub fn bracket(m: &RatMatrix, other: &RatMatrix) -> Result<RatMatrix> {
    m.commutator(other)
}

/// Embedded basis of `g^h`: `(A_α,0,0,0)`, then `X = e_k`, `Y = e_k`, `c = 1`.
pub fn gh_basis(n: usize, h_basis: &[RatMatrix]) -> Result<Vec<RatMatrix>> {
    let mut out = Vec::with_capacity(h_basis.len() + 2 * n + 1);
    for a in h_basis {
        out.push(embed_gh(&GhElement {
            a: a.clone(),
            ..GhElement::zero(n)
        })?);
    }
    for k in 0..n {
        let mut e = GhElement::zero(n);
        e.x[k] = Rational::one();
        out.push(embed_gh(&e)?);
    }
    for k in 0..n {
        let mut e = GhElement::zero(n);
        e.y[k] = Rational::one();
        out.push(embed_gh(&e)?);
    }
    let mut e = GhElement::zero(n);
    e.c = Rational::one();
    out.push(embed_gh(&e)?);
    Ok(out)
}

/// Exact basis of a linear span of square matrices, with bracket-closure status.
#[derive(Clone, Debug)]
pub struct AlgebraSpan {
    size: usize,
    generators: Vec<RatMatrix>,
    echelon: Echelon,
    bracket_closed: bool,
}

impl AlgebraSpan {
    /// Linear span only; `bracket_closed` is computed, not assumed.
    pub fn linear(size: usize, generators: Vec<RatMatrix>) -> Result<Self> {
        let mut echelon = Echelon::new(size * size);
        for g in &generators {
            g.expect_size(size, size)?;
            echelon.insert(g.flat().to_vec());
        }
        let mut span = AlgebraSpan {
            size,
            generators,
            echelon,
            bracket_closed: false,
        };
        span.bracket_closed = span.check_closed()?;
        Ok(span)
    }

    fn check_closed(&self) -> Result<bool> {
        let basis = self.basis_matrices();
        for i in 0..basis.len() {
            for j in 0..i {
                if !self.contains(&basis[i].commutator(&basis[j])?) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn dim(&self) -> usize {
        self.echelon.dim()
    }

    pub fn generators(&self) -> &[RatMatrix] {
        &self.generators
    }

    pub fn echelon(&self) -> &Echelon {
        &self.echelon
    }

    pub fn is_bracket_closed(&self) -> bool {
        self.bracket_closed
    }

    pub fn basis_matrices(&self) -> Vec<RatMatrix> {
        self.echelon
            .rows()
            .iter()
            .map(|r| RatMatrix::from_flat(self.size, r.clone()))
            .collect()
    }

    pub fn contains(&self, m: &RatMatrix) -> bool {
        m.rows() == self.size && m.cols() == self.size && self.echelon.contains(m.flat())
    }
}

/// Smallest bracket-closed subspace containing every generator.
pub fn span_lie_closure(size: usize, generators: Vec<RatMatrix>) -> Result<AlgebraSpan> {
    let mut echelon = Echelon::new(size * size);
    let mut members: Vec<RatMatrix> = Vec::new();
    for g in &generators {
        g.expect_size(size, size)?;
        if echelon.insert(g.flat().to_vec()) {
            members.push(g.clone());
        }
    }
    let mut i = 0;
    while i < members.len() {
        for j in 0..i {
            let br = members[i].commutator(&members[j])?;
            if echelon.insert(br.flat().to_vec()) {
                members.push(br);
            }
        }
        i += 1;
    }
    Ok(AlgebraSpan {
        size,
        generators,
        echelon,
        bracket_closed: true,
    })
}

pub fn equal_span(s1: &AlgebraSpan, s2: &AlgebraSpan) -> bool {
    s1.size == s2.size && s1.echelon == s2.echelon
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeSample {
    pub vector: Vec<String>,
    pub invariant_dim: usize,
    pub proper: bool,
    pub nondegenerate: bool,
}

/// Outcome of the weak-irreducibility probe. Part (a) is exact; the sampled
/// search in part (b) can only find counterexamples, never rule them out.
#[derive(Clone, Debug, Serialize)]
pub struct ProbeReport {
    pub plane_invariant: bool,
    pub plane_isotropic: bool,
    pub samples: Vec<ProbeSample>,
    pub counterexample: Option<Vec<Vec<String>>>,
    pub heuristic: bool,
}

impl ProbeReport {
    pub fn passed(&self) -> bool {
        self.plane_invariant && self.plane_isotropic && self.counterexample.is_none()
    }
}

/// Smallest subspace containing `v` and invariant under every basis element of `s`.
pub fn invariant_closure(s: &AlgebraSpan, v: &[Rational]) -> Echelon {
    let basis = s.basis_matrices();
    let mut space = Echelon::new(s.size());
    space.insert(v.to_vec());
    let mut frontier: Vec<Vec<Rational>> = vec![v.to_vec()];
    while let Some(w) = frontier.pop() {
        for m in &basis {
            let image = m.mul_vec(&w);
            if space.insert(image.clone()) {
                frontier.push(image);
            }
        }
    }
    space
}

pub fn weak_irreducibility_probe(
    s: &AlgebraSpan,
    eta: &EtaForm,
    sample_vectors: &[Vec<Rational>],
) -> Result<ProbeReport> {
    let size = eta.dim();
    if s.size() != size {
        return Err(Error::SizeMismatch {
            expected_rows: size,
            expected_cols: size,
            rows: s.size(),
            cols: s.size(),
        });
    }
    let f = eta.frame();
    let unit = |a: usize| {
        let mut v = vec![Rational::zero(); size];
        v[a] = Rational::one();
        v
    };
    let p1 = unit(f.p1());
    let p2 = unit(f.p2());

    let mut plane = Echelon::new(size);
    plane.insert(p1.clone());
    plane.insert(p2.clone());
    let plane_invariant = s
        .basis_matrices()
        .iter()
        .all(|m| plane.contains(&m.mul_vec(&p1)) && plane.contains(&m.mul_vec(&p2)));
    let plane_isotropic = [(&p1, &p1), (&p1, &p2), (&p2, &p2)]
        .iter()
        .all(|(a, b)| eta.pair(a, b).is_zero());

    let mut vectors: Vec<Vec<Rational>> = (0..size).map(unit).collect();
    vectors.extend(sample_vectors.iter().cloned());

    let mut samples = Vec::new();
    let mut counterexample = None;
    for v in vectors {
        if v.len() != size || v.iter().all(Zero::is_zero) {
            continue;
        }
        let space = invariant_closure(s, &v);
        let rows = space.rows();
        let k = rows.len();
        let mut gram = RatMatrix::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                gram[(i, j)] = eta.pair(&rows[i], &rows[j]);
            }
        }
        let nondegenerate = gram.rank() == k;
        let proper = k < size;
        if proper && nondegenerate && counterexample.is_none() {
            counterexample = Some(
                rows.iter()
                    .map(|r| r.iter().map(crate::rational::format_rational).collect())
                    .collect(),
            );
        }
        samples.push(ProbeSample {
            vector: v.iter().map(crate::rational::format_rational).collect(),
            invariant_dim: k,
            proper,
            nondegenerate,
        });
    }
    Ok(ProbeReport {
        plane_invariant,
        plane_isotropic,
        samples,
        counterexample,
        heuristic: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use proptest::prelude::*;

    fn j2() -> RatMatrix {
        RatMatrix::from_ints(&[&[0, -1], &[1, 0]])
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    /// Leibniz-formula determinant over all permutations.
    fn brute_det(m: &RatMatrix) -> Rational {
        fn perms(k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(k - 1) {
                for pos in 0..k {
                    let mut q = p.clone();
                    q.insert(pos, k - 1);
                    out.push(q);
                }
            }
            out
        }
        let size = m.rows();
        let mut total = Rational::zero();
        for p in perms(size) {
            let mut inversions = 0;
            for i in 0..size {
                for j in i + 1..size {
                    if p[i] > p[j] {
                        inversions += 1;
                    }
                }
            }
            let mut term = if inversions % 2 == 0 { int(1) } else { int(-1) };
            for (i, &pi) in p.iter().enumerate() {
                term *= &m[(i, pi)];
            }
            total += term;
        }
        total
    }

    #[test]
    fn gram_layout_n1() {
        let eta = gram_eta(1);
        let mut expected = RatMatrix::zeros(5, 5);
        for (i, j) in [(0, 3), (1, 4), (2, 2), (3, 0), (4, 1)] {
            expected[(i, j)] = int(1);
        }
        assert_eq!(eta.gram, expected);
    }

    #[test]
    fn gram_is_an_involution() {
        let eta = gram_eta(3);
        assert_eq!(
            eta.gram.checked_mul(&eta.gram).unwrap(),
            RatMatrix::identity(7)
        );
        assert_eq!(eta.gram.transpose(), eta.gram);
    }

    #[test]
    fn gram_determinant_n2() {
        // two hyperbolic planes and an identity block: (+1)
        let eta = gram_eta(2);
        assert_eq!(brute_det(&eta.gram), int(1));
    }

    #[test]
    fn so_membership() {
        let eta = gram_eta(2);
        assert!(so_check(&RatMatrix::zeros(6, 6), &eta).unwrap());
        assert!(!so_check(&RatMatrix::identity(6), &eta).unwrap());
        assert!(so_check(&RatMatrix::identity(5), &eta).is_err());
    }

    #[test]
    fn embed_c_direction() {
        let mut e = GhElement::zero(2);
        e.c = int(1);
        let m = embed_gh(&e).unwrap();
        let mut expected = RatMatrix::zeros(6, 6);
        expected[(0, 5)] = int(-1);
        expected[(1, 4)] = int(1);
        assert_eq!(m, expected);
    }

    #[test]
    fn embed_rotation_block() {
        let m = embed_gh(&GhElement {
            a: j2(),
            ..GhElement::zero(2)
        })
        .unwrap();
        let mut expected = RatMatrix::zeros(6, 6);
        expected[(2, 3)] = int(-1);
        expected[(3, 2)] = int(1);
        assert_eq!(m, expected);
    }

    #[test]
    fn embed_rejects_non_skew() {
        let e = GhElement {
            a: RatMatrix::identity(2),
            ..GhElement::zero(2)
        };
        assert!(matches!(embed_gh(&e), Err(Error::NotSkew { .. })));
    }

    #[test]
    fn decompose_rejects_q_row_entries() {
        let mut m = RatMatrix::zeros(6, 6);
        m[(4, 0)] = int(1);
        match decompose_parabolic(&m) {
            Err(Error::NotInStabilizer { row, col, .. }) => assert_eq!((row, col), (5, 1)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn generic_parabolic_element() {
        let p = ParabolicElement {
            b: RatMatrix::from_ints(&[&[1, 0], &[0, 2]]),
            a: j2(),
            x: ints(&[1, -2]),
            y: ints(&[3, 0]),
            c: rat(1, 2),
        };
        let m = p.to_matrix().unwrap();
        assert!(so_check(&m, &gram_eta(2)).unwrap());
        assert_eq!(decompose_parabolic(&m).unwrap(), p);
        assert_eq!(pr_so_n(&m).unwrap(), j2());
    }

    #[test]
    fn projections_of_embedded_elements() {
        let e = GhElement {
            a: j2(),
            x: ints(&[1, 1]),
            y: ints(&[0, 2]),
            c: int(3),
        };
        assert_eq!(pr_so_n(&embed_gh(&e).unwrap()).unwrap(), j2());
        let e0 = GhElement {
            a: RatMatrix::zeros(2, 2),
            ..e
        };
        assert!(pr_so_n(&embed_gh(&e0).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn brackets_by_direct_multiplication() {
        let mut ex = GhElement::zero(2);
        ex.x = ints(&[1, 0]);
        let mut ey = GhElement::zero(2);
        ey.y = ints(&[1, 0]);
        let mut ec = GhElement::zero(2);
        ec.c = int(1);
        let mx = embed_gh(&ex).unwrap();
        let my = embed_gh(&ey).unwrap();
        assert_eq!(bracket(&mx, &my).unwrap(), embed_gh(&ec).unwrap());
        assert!(bracket(&mx, &mx).unwrap().is_zero());

        let mj = embed_gh(&GhElement {
            a: j2(),
            ..GhElement::zero(2)
        })
        .unwrap();
        let mut ejx = GhElement::zero(2);
        ejx.x = ints(&[0, 1]);
        assert_eq!(bracket(&mj, &mx).unwrap(), embed_gh(&ejx).unwrap());
    }

    #[test]
    fn closure_adds_the_c_direction() {
        let mut ex = GhElement::zero(2);
        ex.x = ints(&[1, 0]);
        let mut ey = GhElement::zero(2);
        ey.y = ints(&[1, 0]);
        let gens = vec![embed_gh(&ex).unwrap(), embed_gh(&ey).unwrap()];
        let span = span_lie_closure(6, gens.clone()).unwrap();
        assert_eq!(span.dim(), 3);
        assert!(span.is_bracket_closed());
        assert!(!AlgebraSpan::linear(6, gens).unwrap().is_bracket_closed());
    }

    #[test]
    fn full_gh_for_so2() {
        let basis = gh_basis(2, &[j2()]).unwrap();
        let lin = AlgebraSpan::linear(6, basis.clone()).unwrap();
        assert_eq!(lin.dim(), 6);
        assert!(lin.is_bracket_closed());
        let closed = span_lie_closure(6, basis).unwrap();
        assert!(equal_span(&lin, &closed));
    }

    #[test]
    fn span_equality_is_scale_and_order_invariant() {
        let basis = gh_basis(2, &[j2()]).unwrap();
        let s = span_lie_closure(6, basis.clone()).unwrap();
        assert!(equal_span(&s, &s));
        let mut rev = basis.clone();
        rev.reverse();
        assert!(equal_span(&s, &span_lie_closure(6, rev).unwrap()));
        let one = AlgebraSpan::linear(6, vec![basis[0].clone()]).unwrap();
        let two = AlgebraSpan::linear(6, vec![basis[0].scale(&int(2))]).unwrap();
        assert!(equal_span(&one, &two));
        assert!(!equal_span(&one, &s));
    }

    #[test]
    fn probe_on_gh_so2() {
        let eta = gram_eta(2);
        let span = span_lie_closure(6, gh_basis(2, &[j2()]).unwrap()).unwrap();
        let report =
            weak_irreducibility_probe(&span, &eta, &[ints(&[1, -1, 2, 3, 1, -2])]).unwrap();
        assert!(report.plane_invariant);
        assert!(report.plane_isotropic);
        assert!(report.counterexample.is_none());
        // the orbit of e1 picks up p1 and p2 and is degenerate
        let e1 = &report.samples[2];
        assert!(e1.invariant_dim == 6 || !e1.nondegenerate);
        let space = invariant_closure(&span, &ints(&[0, 0, 1, 0, 0, 0]));
        assert!(space.contains(&ints(&[1, 0, 0, 0, 0, 0])));
        assert!(space.contains(&ints(&[0, 1, 0, 0, 0, 0])));
    }

    #[test]
    fn probe_finds_a_nondegenerate_invariant_subspace() {
        // span{p1, q1} is preserved by the B = diag(1,0) direction alone
        let p = ParabolicElement {
            b: RatMatrix::from_ints(&[&[1, 0], &[0, 0]]),
            a: RatMatrix::zeros(1, 1),
            x: ints(&[0]),
            y: ints(&[0]),
            c: int(0),
        };
        let eta = gram_eta(1);
        let span = span_lie_closure(5, vec![p.to_matrix().unwrap()]).unwrap();
        let report = weak_irreducibility_probe(&span, &eta, &[]).unwrap();
        assert!(report.counterexample.is_some());
    }

    fn arb_gh(n: usize) -> impl Strategy<Value = GhElement> {
        let small = || -3i64..=3;
        (
            prop::collection::vec(small(), n * (n - 1) / 2),
            prop::collection::vec(small(), n),
            prop::collection::vec(small(), n),
            small(),
        )
            .prop_map(move |(upper, x, y, c)| {
                let mut a = RatMatrix::zeros(n, n);
                let mut it = upper.into_iter();
                for i in 0..n {
                    for j in i + 1..n {
                        let v = int(it.next().unwrap());
                        a[(i, j)] = v.clone();
                        a[(j, i)] = -v;
                    }
                }
                GhElement {
                    a,
                    x: ints(&x),
                    y: ints(&y),
                    c: int(c),
                }
            })
    }

    proptest! {
        #[test]
        fn embedded_elements_are_in_so(e in arb_gh(3)) {
            let m = embed_gh(&e).unwrap();
            prop_assert!(so_check(&m, &gram_eta(3)).unwrap());
            let back = decompose_parabolic(&m).unwrap();
            prop_assert!(back.b.is_zero());
            prop_assert_eq!(back.a, e.a);
            prop_assert_eq!(back.x, e.x);
            prop_assert_eq!(back.y, e.y);
            prop_assert_eq!(back.c, e.c);
        }

        #[test]
        fn bracket_formula_and_projection_homomorphism(e in arb_gh(3), f in arb_gh(3)) {
            let m = embed_gh(&e).unwrap();
            let mf = embed_gh(&f).unwrap();
            let br = bracket(&m, &mf).unwrap();
            let ax = |a: &RatMatrix, v: &[Rational]| a.mul_vec(v);
            let sub = |u: Vec<Rational>, v: Vec<Rational>| -> Vec<Rational> {
                u.into_iter().zip(v).map(|(a, b)| a - b).collect()
            };
            let dot = |u: &[Rational], v: &[Rational]| u.iter().zip(v).fold(Rational::zero(), |s, (a, b)| s + a * b);
            let expected = GhElement {
                a: e.a.commutator(&f.a).unwrap(),
                x: sub(ax(&e.a, &f.x), ax(&f.a, &e.x)),
                y: sub(ax(&e.a, &f.y), ax(&f.a, &e.y)),
                c: dot(&e.x, &f.y) - dot(&f.x, &e.y),
            };
            prop_assert_eq!(&br, &embed_gh(&expected).unwrap());
            prop_assert_eq!(pr_so_n(&br).unwrap(), pr_so_n(&m).unwrap().commutator(&pr_so_n(&mf).unwrap()).unwrap());
        }

        #[test]
        fn closure_is_idempotent(e in arb_gh(2), f in arb_gh(2)) {
            let s = span_lie_closure(6, vec![embed_gh(&e).unwrap(), embed_gh(&f).unwrap()]).unwrap();
            let again = span_lie_closure(6, s.basis_matrices()).unwrap();
            prop_assert!(equal_span(&s, &again));
        }
    }
}
