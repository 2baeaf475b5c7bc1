//! Fiberwise Spin_c(4) algebra.
//!
//! The cotangent fiber is identified with the quaternions (e1=1, e2=i, e3=j,
//! e4=k) and the half-spinor fibers with `W+- = C^2 = {z + jw}`, complex
//! scalars acting on the right. A 1-form `v` acts on `W+ (+) W-` by
//!
//! ```text
//!   rho(v) = [ 0     M(v) ]
//!            [ M(-v̄)  0   ]
//! ```
//!
//! where `M(q)` is left multiplication by the quaternion `q` in the `(z, w)`
//! coordinates, so `rho(v)^2 = -|v|^2`. The self-dual basis
//!
//! ```text
//!   f1 = (e1^e2 + e3^e4)/2,  f2 = (e1^e3 + e4^e2)/2,  f3 = (e1^e4 + e2^e3)/2
//! ```
//!
//! acts on `W+` as left multiplication by i, j, k (Pauli matrices) and kills
//! `W-`. The quadratic map `sigma` sends a `W+` spinor to the traceless
//! hermitian endomorphism `psi psi* - |psi|^2/2`, the right-hand side of the
//! curvature equation.
//!
//! Hermitian inner products here are conjugate-linear in the FIRST slot,
//! `<a,b> = sum conj(a_i) b_i`; with the su(2) pairing `<A,B> = tr(AB)/2` this
//! is the convention under which the pairing identity
//! `<rho(w)psi, psi> = 2i <rho(w), i sigma(psi)>` holds on the nose.

use crate::error::{Result, SwtError};
use crate::scalar::{ComplexScalar, Mat2, Mat4, RealScalar};

/// Quaternion with real coefficients: `r + i*x + j*y + k*z`.
#[derive(Clone, Debug, PartialEq)]
pub struct Quaternion<R> {
    pub r: R,
    pub i: R,
    pub j: R,
    pub k: R,
}

impl<R: RealScalar> Quaternion<R> {
    pub fn new(r: R, i: R, j: R, k: R) -> Self {
        Quaternion { r, i, j, k }
    }

    pub fn zero() -> Self {
        Quaternion::new(R::zero(), R::zero(), R::zero(), R::zero())
    }

    pub fn one() -> Self {
        Quaternion::new(R::one(), R::zero(), R::zero(), R::zero())
    }

    /// Coframe basis element `e^axis`, `axis` in 1..=4 (1, i, j, k).
    pub fn basis(axis: usize) -> Result<Self> {
        let mut q = Self::zero();
        match axis {
            1 => q.r = R::one(),
            2 => q.i = R::one(),
            3 => q.j = R::one(),
            4 => q.k = R::one(),
            _ => {
                return Err(SwtError::InvalidArgument(format!(
                    "coframe axis must be 1..=4, got {axis}"
                )))
            }
        }
        Ok(q)
    }

    pub fn add(&self, o: &Self) -> Self {
        Quaternion::new(
            self.r.add(&o.r),
            self.i.add(&o.i),
            self.j.add(&o.j),
            self.k.add(&o.k),
        )
    }

    pub fn neg(&self) -> Self {
        Quaternion::new(self.r.neg(), self.i.neg(), self.j.neg(), self.k.neg())
    }

    pub fn conj(&self) -> Self {
        Quaternion::new(self.r.clone(), self.i.neg(), self.j.neg(), self.k.neg())
    }

    pub fn norm_sq(&self) -> R {
        self.r
            .mul(&self.r)
            .add(&self.i.mul(&self.i))
            .add(&self.j.mul(&self.j))
            .add(&self.k.mul(&self.k))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (a, b, c, d) = (&self.r, &self.i, &self.j, &self.k);
        let (e, f, g, h) = (&o.r, &o.i, &o.j, &o.k);
        Quaternion::new(
            a.mul(e).sub(&b.mul(f)).sub(&c.mul(g)).sub(&d.mul(h)),
            a.mul(f).add(&b.mul(e)).add(&c.mul(h)).sub(&d.mul(g)),
            a.mul(g).sub(&b.mul(h)).add(&c.mul(e)).add(&d.mul(f)),
            a.mul(h).add(&b.mul(g)).sub(&c.mul(f)).add(&d.mul(e)),
        )
    }

    pub fn scale(&self, s: &R) -> Self {
        Quaternion::new(
            self.r.mul(s),
            self.i.mul(s),
            self.j.mul(s),
            self.k.mul(s),
        )
    }

    /// Imaginary part as a quaternion.
    pub fn imag(&self) -> Self {
        Quaternion::new(R::zero(), self.i.clone(), self.j.clone(), self.k.clone())
    }

    /// Matrix of left multiplication by `self` on `{z + jw}` in `(z, w)`
    /// coordinates: `[[z_q, -conj(w_q)], [w_q, conj(z_q)]]` with
    /// `z_q = r + i*x`, `w_q = y - i*z`.
    pub fn left_mul_matrix<S: ComplexScalar<Real = R>>(&self) -> Mat2<S> {
        let zq = S::from_parts(self.r.clone(), self.i.clone());
        let wq = S::from_parts(self.j.clone(), self.k.neg());
        Mat2([[zq.clone(), wq.conj().neg()], [wq, zq.conj()]])
    }
}

/// Fiber value of `W+`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinorPlus<S> {
    pub z: S,
    pub w: S,
}

/// Fiber value of `W-`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinorMinus<S> {
    pub z: S,
    pub w: S,
}

impl<S: ComplexScalar> SpinorPlus<S> {
    pub fn new(z: S, w: S) -> Self {
        SpinorPlus { z, w }
    }
    pub fn zero() -> Self {
        SpinorPlus::new(S::zero(), S::zero())
    }
    pub fn norm_sq(&self) -> S::Real {
        self.z.norm_sq().add(&self.w.norm_sq())
    }
    pub fn components(&self) -> [S; 2] {
        [self.z.clone(), self.w.clone()]
    }
}

impl<S: ComplexScalar> SpinorMinus<S> {
    pub fn new(z: S, w: S) -> Self {
        SpinorMinus { z, w }
    }
    pub fn zero() -> Self {
        SpinorMinus::new(S::zero(), S::zero())
    }
    pub fn norm_sq(&self) -> S::Real {
        self.z.norm_sq().add(&self.w.norm_sq())
    }
    pub fn components(&self) -> [S; 2] {
        [self.z.clone(), self.w.clone()]
    }
}

/// Hermitian inner product of C^2 vectors, conjugate-linear in the first slot.
pub fn inner_c2<S: ComplexScalar>(a: &[S; 2], b: &[S; 2]) -> S {
    a[0].conj().mul(&b[0]).add(&a[1].conj().mul(&b[1]))
}

/// Image of a 1-form or 2-form under the Clifford representation, as a 4x4
/// matrix on `W+ (+) W-` (rows/cols 0..2 = `W+`).
#[derive(Clone, Debug, PartialEq)]
pub struct CliffordElement<S> {
    pub m: Mat4<S>,
}

impl<S: ComplexScalar> CliffordElement<S> {
    pub fn from_mat(m: Mat4<S>) -> Self {
        CliffordElement { m }
    }

    /// Action of a real 1-form with quaternion coordinates `v`.
    pub fn from_one_form(v: &Quaternion<S::Real>) -> Self {
        let mut m = Mat4::zero();
        m.set_block(0, 1, &v.left_mul_matrix());
        m.set_block(1, 0, &v.conj().neg().left_mul_matrix());
        CliffordElement { m }
    }

    pub fn apply_plus(&self, psi: &SpinorPlus<S>) -> SpinorMinus<S> {
        let v = self.m.apply(&[
            psi.z.clone(),
            psi.w.clone(),
            S::zero(),
            S::zero(),
        ]);
        SpinorMinus::new(v[2].clone(), v[3].clone())
    }

    pub fn apply_minus(&self, phi: &SpinorMinus<S>) -> SpinorPlus<S> {
        let v = self.m.apply(&[
            S::zero(),
            S::zero(),
            phi.z.clone(),
            phi.w.clone(),
        ]);
        SpinorPlus::new(v[0].clone(), v[1].clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        CliffordElement {
            m: self.m.mul(&other.m),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        CliffordElement {
            m: self.m.add(&other.m),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        CliffordElement {
            m: self.m.sub(&other.m),
        }
    }

    pub fn scale(&self, s: &S) -> Self {
        CliffordElement {
            m: self.m.scale(s),
        }
    }

    /// `W+` block.
    pub fn plus_block(&self) -> Mat2<S> {
        self.m.block(0, 0)
    }

    /// `W-` block.
    pub fn minus_block(&self) -> Mat2<S> {
        self.m.block(1, 1)
    }
}

/// Clifford action of the coframe 1-form `e^direction`, `direction` in 1..=4.
///
/// Entries are 0, +-1, +-i only; `clifford_vector(d)^2 = -I` exactly.
pub fn clifford_vector<S: ComplexScalar>(direction: usize) -> Result<CliffordElement<S>> {
    let v = Quaternion::<S::Real>::basis(direction)?;
    Ok(CliffordElement::from_one_form(&v))
}

/// Pauli matrices: the action of `f1, f2, f3` on `W+` (multiplication by
/// i, j, k respectively).
pub fn pauli_matrix<S: ComplexScalar>(which: usize) -> Mat2<S> {
    let q = Quaternion::<S::Real>::basis(which + 1).expect("1..=3");
    q.left_mul_matrix()
}

/// Combination `c1 rho(f1) + c2 rho(f2) + c3 rho(f3)` on `W+`, complex
/// coefficients allowed (the complexified self-dual forms act as sl(W+)).
pub fn pauli_combination<S: ComplexScalar>(c: &[S; 3]) -> Mat2<S> {
    let mut acc = Mat2::zero();
    for (k, ck) in c.iter().enumerate() {
        acc = acc.add(&pauli_matrix::<S>(k).scale(ck));
    }
    acc
}

/// Clifford action of a self-dual 2-form with real coefficients in the
/// `f1, f2, f3` basis. The `W-` block is identically zero.
pub fn clifford_self_dual<S: ComplexScalar>(coeffs: &[S::Real; 3]) -> CliffordElement<S> {
    let c: [S; 3] = [
        S::from_real(coeffs[0].clone()),
        S::from_real(coeffs[1].clone()),
        S::from_real(coeffs[2].clone()),
    ];
    let mut m = Mat4::zero();
    m.set_block(0, 0, &pauli_combination(&c));
    CliffordElement { m }
}

/// Traceless hermitian endomorphism of `W+`: `[[d, c], [conj(c), -d]]`
/// with `d` real.
#[derive(Clone, Debug, PartialEq)]
pub struct TracelessHermitian2<S: ComplexScalar> {
    pub d: S::Real,
    pub c: S,
}

impl<S: ComplexScalar> TracelessHermitian2<S> {
    pub fn new(d: S::Real, c: S) -> Self {
        TracelessHermitian2 { d, c }
    }

    pub fn zero() -> Self {
        TracelessHermitian2::new(S::Real::zero(), S::zero())
    }

    pub fn as_mat2(&self) -> Mat2<S> {
        Mat2([
            [S::from_real(self.d.clone()), self.c.clone()],
            [self.c.conj(), S::from_real(self.d.neg())],
        ])
    }

    pub fn add(&self, o: &Self) -> Self {
        TracelessHermitian2::new(self.d.add(&o.d), self.c.add(&o.c))
    }

    pub fn sub(&self, o: &Self) -> Self {
        TracelessHermitian2::new(self.d.sub(&o.d), self.c.sub(&o.c))
    }

    pub fn neg(&self) -> Self {
        TracelessHermitian2::new(self.d.neg(), self.c.neg())
    }

    pub fn scale(&self, s: &S::Real) -> Self {
        TracelessHermitian2::new(self.d.mul(s), self.c.mul(&S::from_real(s.clone())))
    }

    /// `i rho(f1 y1 + f2 y2 + f3 y3)` is hermitian traceless; this builds it
    /// from the coefficients: `d = -y1`, `c = y3 - i y2`.
    pub fn from_pauli(y: &[S::Real; 3]) -> Self {
        TracelessHermitian2::new(y[0].neg(), S::from_parts(y[2].clone(), y[1].neg()))
    }

    /// Inverse of [`Self::from_pauli`]: coefficients `y` with
    /// `self = i rho(sum y_k f_k)`.
    pub fn pauli_coeffs(&self) -> [S::Real; 3] {
        [self.d.neg(), self.c.im().neg(), self.c.re()]
    }

    /// Squared norm in the `tr(AB)/2` metric: `d^2 + |c|^2`.
    pub fn norm_sq(&self) -> S::Real {
        self.d.mul(&self.d).add(&self.c.norm_sq())
    }

    pub fn apply(&self, psi: &SpinorPlus<S>) -> SpinorPlus<S> {
        let m = self.as_mat2();
        let v = m.apply(&[psi.z.clone(), psi.w.clone()]);
        SpinorPlus::new(v[0].clone(), v[1].clone())
    }
}

/// The quadratic map: `sigma(psi) = psi psi* - |psi|^2/2`, i.e.
/// `d = (|z|^2 - |w|^2)/2`, `c = z conj(w)`.
pub fn sigma<S: ComplexScalar>(psi: &SpinorPlus<S>) -> TracelessHermitian2<S> {
    let half = S::Real::from_ratio(1, 2);
    let d = psi.z.norm_sq().sub(&psi.w.norm_sq()).mul(&half);
    let c = psi.z.mul(&psi.w.conj());
    TracelessHermitian2::new(d, c)
}

/// Hermitian-symmetric polarization of [`sigma`]:
/// `sigma(psi, phi) = (psi phi* + phi psi*)/2 - Re<psi, phi>/2`.
///
/// Diagonal case `sigma(psi, psi) = sigma(psi)`; for each Pauli generator
/// `w` the defining pairing `<rho(w) psi, phi> = 2i <rho(w), i sigma(psi,phi)>`
/// holds in its imaginary part, and in full when `psi = phi`.
pub fn sigma_polar<S: ComplexScalar>(
    psi: &SpinorPlus<S>,
    phi: &SpinorPlus<S>,
) -> TracelessHermitian2<S> {
    let half = S::Real::from_ratio(1, 2);
    let zz = psi.z.mul(&phi.z.conj()).re();
    let ww = psi.w.mul(&phi.w.conj()).re();
    let d = zz.sub(&ww).mul(&half);
    let c = psi
        .z
        .mul(&phi.w.conj())
        .add(&phi.z.mul(&psi.w.conj()))
        .mul(&S::from_ratio(1, 2));
    TracelessHermitian2::new(d, c)
}

/// su(2)-type inner product `tr(ab)/2 = d_a d_b + Re(c_a conj(c_b))`,
/// positive definite on traceless hermitian matrices.
pub fn inner_su2<S: ComplexScalar>(
    a: &TracelessHermitian2<S>,
    b: &TracelessHermitian2<S>,
) -> S::Real {
    a.d.mul(&b.d).add(&a.c.mul(&b.c.conj()).re())
}

/// `tr(AB)/2` for general 2x2 matrices (used in the pairing identity, where
/// the arguments are skew-hermitian).
pub fn half_trace_product<S: ComplexScalar>(a: &Mat2<S>, b: &Mat2<S>) -> S {
    a.mul(b).trace().mul(&S::from_ratio(1, 2))
}

/// Matrices of the canonical-frame forms `f` and `fbar` on `W+`
/// (`f = 2(f2 - i f3)`, `fbar = 2(f2 + i f3)`).
pub fn kahler_frame_matrices<S: ComplexScalar>() -> (Mat2<S>, Mat2<S>) {
    let four = S::from_ratio(4, 1);
    let mut f = Mat2::zero();
    f.0[0][1] = four.neg();
    let mut fbar = Mat2::zero();
    fbar.0[1][0] = four;
    (f, fbar)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{C64, CRat};
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> CRat {
        CRat::from_ratio(n, d)
    }

    fn rat_spinor(zn: i64, zi: i64, wn: i64, wi: i64) -> SpinorPlus<CRat> {
        SpinorPlus::new(
            rat(zn, 1).add(&CRat::i().mul(&rat(zi, 1))),
            rat(wn, 1).add(&CRat::i().mul(&rat(wi, 1))),
        )
    }

    /// The four displayed 4x4 matrices, frozen entry by entry.
    #[test]
    fn clifford_vector_matches_displays() {
        let o = C64::new(0.0, 0.0);
        let p = C64::new(1.0, 0.0);
        let n = C64::new(-1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        let mi = C64::new(0.0, -1.0);
        let displays = [
            [[o, o, p, o], [o, o, o, p], [n, o, o, o], [o, n, o, o]],
            [[o, o, i, o], [o, o, o, mi], [i, o, o, o], [o, mi, o, o]],
            [[o, o, o, n], [o, o, p, o], [o, n, o, o], [p, o, o, o]],
            [[o, o, o, mi], [o, o, mi, o], [o, mi, o, o], [mi, o, o, o]],
        ];
        for (d, want) in displays.iter().enumerate() {
            let got = clifford_vector::<C64>(d + 1).unwrap();
            assert_eq!(got.m.0, *want, "rho(e^{})", d + 1);
        }
    }

    #[test]
    fn clifford_vector_rejects_bad_axis() {
        assert!(clifford_vector::<C64>(0).is_err());
        assert!(clifford_vector::<C64>(5).is_err());
    }

    #[test]
    fn basis_vector_action_examples() {
        // rho(e1) sends the W+ value (1,0) to the W- value (-1,0);
        // rho(e2) sends it to (i,0).
        let psi = SpinorPlus::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0));
        let r1 = clifford_vector::<C64>(1).unwrap().apply_plus(&psi);
        assert_eq!(r1, SpinorMinus::new(C64::new(-1.0, 0.0), C64::new(0.0, 0.0)));
        let r2 = clifford_vector::<C64>(2).unwrap().apply_plus(&psi);
        assert_eq!(r2, SpinorMinus::new(C64::new(0.0, 1.0), C64::new(0.0, 0.0)));
    }

    /// All 16 anticommutators, exactly: rho(e^i)rho(e^j) + rho(e^j)rho(e^i)
    /// = -2 delta_ij.
    #[test]
    fn anticommutators_exact() {
        let rho: Vec<CliffordElement<CRat>> =
            (1..=4).map(|d| clifford_vector(d).unwrap()).collect();
        let minus_two_id = Mat4::<CRat>::identity().scale(&rat(-2, 1));
        for a in 0..4 {
            for b in 0..4 {
                let anti = rho[a].mul(&rho[b]).m.add(&rho[b].mul(&rho[a]).m);
                if a == b {
                    assert_eq!(anti, minus_two_id, "({a},{b})");
                } else {
                    assert!(anti.is_zero(), "({a},{b})");
                }
            }
        }
    }

    /// Wedge-to-commutator rule on the f-basis expansions, exactly:
    /// rho(f_k) computed as sums of half-commutators equals the Pauli form,
    /// and its W- block vanishes.
    #[test]
    fn wedge_commutator_rule_exact() {
        let rho: Vec<CliffordElement<CRat>> =
            (1..=4).map(|d| clifford_vector(d).unwrap()).collect();
        let half = rat(1, 2);
        let wedge = |a: usize, b: usize| -> Mat4<CRat> {
            rho[a]
                .mul(&rho[b])
                .m
                .sub(&rho[b].mul(&rho[a]).m)
                .scale(&half)
        };
        // f1 = (e1^e2 + e3^e4)/2, f2 = (e1^e3 + e4^e2)/2, f3 = (e1^e4 + e2^e3)/2
        let pairs = [[(0, 1), (2, 3)], [(0, 2), (3, 1)], [(0, 3), (1, 2)]];
        for (k, pp) in pairs.iter().enumerate() {
            let built = wedge(pp[0].0, pp[0].1)
                .add(&wedge(pp[1].0, pp[1].1))
                .scale(&half);
            let mut coeffs = [
                <BigRationalAlias as RealScalar>::zero(),
                RealScalar::zero(),
                RealScalar::zero(),
            ];
            coeffs[k] = RealScalar::one();
            let direct = clifford_self_dual::<CRat>(&coeffs);
            assert_eq!(built, direct.m, "f{}", k + 1);
            assert!(direct.minus_block().is_zero(), "W- block of f{}", k + 1);
        }
    }

    type BigRationalAlias = num_rational::BigRational;

    #[test]
    fn self_dual_action_examples() {
        // f1 on (0,1) -> (0,-i); f2 on (1,0) -> (0,1); zero coefficients -> 0.
        let e01 = SpinorPlus::new(C64::new(0.0, 0.0), C64::new(1.0, 0.0));
        let e10 = SpinorPlus::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0));
        let f1 = clifford_self_dual::<C64>(&[1.0, 0.0, 0.0]);
        let out = f1.plus_block().apply(&e01.components());
        assert_eq!(out, [C64::new(0.0, 0.0), C64::new(0.0, -1.0)]);
        let f2 = clifford_self_dual::<C64>(&[0.0, 1.0, 0.0]);
        let out = f2.plus_block().apply(&e10.components());
        assert_eq!(out, [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]);
        let zero = clifford_self_dual::<C64>(&[0.0, 0.0, 0.0]);
        assert!(zero.m.is_zero());
    }

    #[test]
    fn sigma_examples() {
        // (1,0) -> [[1/2, 0], [0, -1/2]]; (0,0) -> 0; (1,1) -> [[0,1],[1,0]].
        let s = sigma(&rat_spinor(1, 0, 0, 0));
        assert_eq!(s.d, BigRationalAlias::from_ratio(1, 2));
        assert!(s.c.is_zero());

        let s0 = sigma(&rat_spinor(0, 0, 0, 0));
        assert!(s0.d.is_zero() && s0.c.is_zero());

        let s11 = sigma(&rat_spinor(1, 0, 1, 0));
        assert!(s11.d.is_zero());
        assert_eq!(s11.c, rat(1, 1));
    }

    /// sigma in the Pauli basis: i sigma(z,w) = rho[ d f1 + Im(z wbar) f2
    /// - Re(z wbar) f3 ], exactly on rational spinors.
    #[test]
    fn sigma_pauli_expansion_exact() {
        let samples = [
            rat_spinor(1, 0, 0, 0),
            rat_spinor(0, 0, 1, 0),
            rat_spinor(2, -1, 1, 3),
            rat_spinor(-3, 2, 0, 5),
        ];
        for psi in &samples {
            let s = sigma(psi);
            let zwbar = psi.z.mul(&psi.w.conj());
            let coeffs = [
                CRat::from_real(s.d.clone()),
                CRat::from_real(zwbar.im()),
                CRat::from_real(zwbar.re().neg()),
            ];
            let rhs = pauli_combination::<CRat>(&coeffs);
            let lhs = s.as_mat2().scale(&CRat::i());
            assert_eq!(lhs, rhs);
        }
    }

    /// |sigma(psi)|^2 = |psi|^4 / 4 and <sigma(psi)psi, psi> = |psi|^4 / 2,
    /// exactly.
    #[test]
    fn sigma_norm_identities_exact() {
        for psi in [rat_spinor(2, -1, 1, 3), rat_spinor(0, 1, -2, 5)] {
            let s = sigma(&psi);
            let n2 = psi.norm_sq();
            let n4 = n2.mul(&n2);
            assert_eq!(
                inner_su2(&s, &s),
                n4.mul(&BigRationalAlias::from_ratio(1, 4))
            );
            let spsi = s.apply(&psi);
            let pairing = inner_c2(&spsi.components(), &psi.components());
            assert_eq!(pairing.re(), n4.mul(&BigRationalAlias::from_ratio(1, 2)));
            assert!(pairing.im().is_zero());
        }
    }

    /// <rho(w)psi, psi> = 2i <rho(w), i sigma(psi)> for w = f1, f2, f3,
    /// exactly.
    #[test]
    fn pairing_identity_exact() {
        for psi in [rat_spinor(2, -1, 1, 3), rat_spinor(1, 4, -2, 0)] {
            let s = sigma(&psi).as_mat2().scale(&CRat::i());
            for k in 0..3 {
                let rho = pauli_matrix::<CRat>(k);
                let lhs = inner_c2(&rho.apply(&psi.components()), &psi.components());
                let rhs = CRat::from_ratio(2, 1)
                    .mul(&CRat::i())
                    .mul(&half_trace_product(&rho, &s));
                assert_eq!(lhs, rhs, "f{}", k + 1);
            }
        }
    }

    /// The polarization oracle: solve the 3x3 real system
    /// `x_k = -Im<rho(f_k)psi, phi>/2` (the solvable part of the defining
    /// pairing) and compare `-i rho(sum x_k f_k)`'s hermitian form with the
    /// closed-form polarization.
    #[test]
    fn sigma_polar_matches_pairing_system() {
        let cases = [
            (rat_spinor(1, 0, 0, 0), rat_spinor(0, 0, 1, 0)),
            (rat_spinor(2, -1, 1, 3), rat_spinor(1, 4, -2, 0)),
            (rat_spinor(0, 1, 5, -2), rat_spinor(3, 3, 1, 1)),
        ];
        let mhalf = BigRationalAlias::from_ratio(-1, 2);
        for (psi, phi) in &cases {
            let mut x = [
                <BigRationalAlias as RealScalar>::zero(),
                RealScalar::zero(),
                RealScalar::zero(),
            ];
            for k in 0..3 {
                let lhs = inner_c2(
                    &pauli_matrix::<CRat>(k).apply(&psi.components()),
                    &phi.components(),
                );
                x[k] = lhs.im().mul(&mhalf);
            }
            // sigma = -i rho(sum x_k f_k), i.e. from_pauli(x).
            let from_system = TracelessHermitian2::<CRat>::from_pauli(&x);
            let closed = sigma_polar(psi, phi);
            assert_eq!(closed.d, from_system.d);
            assert_eq!(closed.c, from_system.c);
        }
    }

    #[test]
    fn sigma_polar_edge_cases() {
        let psi = rat_spinor(1, 0, 0, 0);
        // Diagonal reduces to sigma.
        let d = sigma_polar(&psi, &psi);
        let s = sigma(&psi);
        assert_eq!(d.d, s.d);
        assert_eq!(d.c, s.c);
        // Zero second argument gives zero.
        let z = sigma_polar(&psi, &rat_spinor(0, 0, 0, 0));
        assert!(z.d.is_zero() && z.c.is_zero());
        // (1,0),(0,1) -> [[0,1/2],[1/2,0]].
        let m = sigma_polar(&rat_spinor(1, 0, 0, 0), &rat_spinor(0, 0, 1, 0));
        assert!(m.d.is_zero());
        assert_eq!(m.c, rat(1, 2));
    }

    #[test]
    fn inner_su2_values() {
        // <sigma(1,0), sigma(1,0)> = 1/4.
        let s = sigma(&rat_spinor(1, 0, 0, 0));
        assert_eq!(inner_su2(&s, &s), BigRationalAlias::from_ratio(1, 4));
        // Zero argument.
        let z = TracelessHermitian2::<CRat>::zero();
        assert!(inner_su2(&z, &s).is_zero());
        // Distinct Pauli directions are orthogonal: i*rho(f2) vs i*rho(f3).
        let a = TracelessHermitian2::<CRat>::from_pauli(&[
            RealScalar::zero(),
            RealScalar::one(),
            RealScalar::zero(),
        ]);
        let b = TracelessHermitian2::<CRat>::from_pauli(&[
            RealScalar::zero(),
            RealScalar::zero(),
            RealScalar::one(),
        ]);
        assert!(inner_su2(&a, &b).is_zero());
    }

    #[test]
    fn pauli_coeff_round_trip() {
        let y = [
            BigRationalAlias::from_ratio(3, 7),
            BigRationalAlias::from_ratio(-2, 5),
            BigRationalAlias::from_ratio(1, 3),
        ];
        let h = TracelessHermitian2::<CRat>::from_pauli(&y);
        assert_eq!(h.pauli_coeffs(), y);
        // And from_pauli really is i * rho_sd(y).
        let coeffs = [
            CRat::from_real(y[0].clone()),
            CRat::from_real(y[1].clone()),
            CRat::from_real(y[2].clone()),
        ];
        let m = pauli_combination::<CRat>(&coeffs).scale(&CRat::i());
        assert_eq!(h.as_mat2(), m);
    }

    #[test]
    fn kahler_frame_matrix_values() {
        // f = 2(f2 - i f3) and fbar = 2(f2 + i f3) in matrix form.
        let (f, fbar) = kahler_frame_matrices::<CRat>();
        let two = CRat::from_ratio(2, 1);
        let built_f = pauli_matrix::<CRat>(1)
            .sub(&pauli_matrix::<CRat>(2).scale(&CRat::i()))
            .scale(&two);
        let built_fbar = pauli_matrix::<CRat>(1)
            .add(&pauli_matrix::<CRat>(2).scale(&CRat::i()))
            .scale(&two);
        assert_eq!(f, built_f);
        assert_eq!(fbar, built_fbar);
    }

    proptest! {
        /// Quaternion algebra: associativity and q qbar = |q|^2, exactly.
        #[test]
        fn quaternion_algebra(coeffs in proptest::array::uniform12(-9i64..=9)) {
            let r = |n: i64| BigRationalAlias::from_ratio(n, 1);
            let q1 = Quaternion::new(r(coeffs[0]), r(coeffs[1]), r(coeffs[2]), r(coeffs[3]));
            let q2 = Quaternion::new(r(coeffs[4]), r(coeffs[5]), r(coeffs[6]), r(coeffs[7]));
            let q3 = Quaternion::new(r(coeffs[8]), r(coeffs[9]), r(coeffs[10]), r(coeffs[11]));
            prop_assert_eq!(q1.mul(&q2).mul(&q3), q1.mul(&q2.mul(&q3)));
            let n = q1.mul(&q1.conj());
            prop_assert_eq!(n.r, q1.norm_sq());
            prop_assert!(n.i.is_zero() && n.j.is_zero() && n.k.is_zero());
        }

        /// rho(v)^2 = -|v|^2 exactly for arbitrary rational 1-forms.
        #[test]
        fn clifford_relation_exact(coeffs in proptest::array::uniform4(-9i64..=9)) {
            let r = |n: i64| BigRationalAlias::from_ratio(n, 1);
            let v = Quaternion::new(r(coeffs[0]), r(coeffs[1]), r(coeffs[2]), r(coeffs[3]));
            let rho = CliffordElement::<CRat>::from_one_form(&v);
            let sq = rho.mul(&rho).m;
            let want = Mat4::<CRat>::identity()
                .scale(&CRat::from_real(v.norm_sq()).neg());
            prop_assert_eq!(sq, want);
        }

        /// Unit 1-forms in floating point: ||rho(v)^2 + I|| < 1e-14.
        #[test]
        fn clifford_relation_float(raw in proptest::array::uniform4(-1.0f64..=1.0)) {
            let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
            prop_assume!(norm > 1e-3);
            let v = Quaternion::new(raw[0] / norm, raw[1] / norm, raw[2] / norm, raw[3] / norm);
            let rho = CliffordElement::<C64>::from_one_form(&v);
            let dev = rho.mul(&rho).m.add(&Mat4::identity());
            prop_assert!(dev.max_abs_f64() < 1e-14);
        }

        /// Pauli actions preserve the spinor norm (skew-adjoint generators).
        #[test]
        fn pauli_norm_preserving(parts in proptest::array::uniform4(-5.0f64..=5.0)) {
            let psi = SpinorPlus::new(C64::new(parts[0], parts[1]), C64::new(parts[2], parts[3]));
            for k in 0..3 {
                let out = pauli_matrix::<C64>(k).apply(&psi.components());
                let n_out = out[0].norm_sqr() + out[1].norm_sqr();
                prop_assert!((n_out - psi.norm_sq()).abs() <= 1e-12 * (1.0 + psi.norm_sq()));
            }
        }
    }
}
