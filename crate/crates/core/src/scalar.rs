//! Scalar backends and small dense matrices.
//!
//! Every fiberwise identity in this crate is stated over a complex field. Two
//! backends implement the same contracts: `Complex<f64>` for lattice fields and
//! `Complex<BigRational>` (Gaussian rationals) for exact identity checks. The
//! [`ComplexScalar`] / [`RealScalar`] traits carry just enough structure for the
//! Clifford algebra; they deliberately avoid division, which none of the
//! identities need once constants are written as rationals.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use std::fmt::Debug;

/// Double-precision complex scalar.
pub type C64 = Complex<f64>;
/// Exact Gaussian-rational scalar.
pub type CRat = Complex<BigRational>;

/// Real coefficient field (f64 or arbitrary-precision rational).
pub trait RealScalar: Clone + PartialEq + PartialOrd + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn to_f64(&self) -> f64;
    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }
}

impl RealScalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl RealScalar for BigRational {
    fn zero() -> Self {
        BigRational::from_integer(BigInt::from(0))
    }
    fn one() -> Self {
        BigRational::from_integer(BigInt::from(1))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Complex coefficient field over a [`RealScalar`].
pub trait ComplexScalar: Clone + PartialEq + Debug {
    type Real: RealScalar;

    fn zero() -> Self;
    fn one() -> Self;
    /// The imaginary unit.
    fn i() -> Self;
    fn from_parts(re: Self::Real, im: Self::Real) -> Self;
    fn from_real(re: Self::Real) -> Self {
        Self::from_parts(re, Self::Real::zero())
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_real(Self::Real::from_ratio(num, den))
    }
    fn re(&self) -> Self::Real;
    fn im(&self) -> Self::Real;
    fn conj(&self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// |z|^2 as a real scalar.
    fn norm_sq(&self) -> Self::Real {
        let r = self.re();
        let i = self.im();
        r.mul(&r).add(&i.mul(&i))
    }
    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }
    /// Lossy view for reporting and float tolerances.
    fn to_c64(&self) -> C64 {
        C64::new(self.re().to_f64(), self.im().to_f64())
    }
}

impl ComplexScalar for C64 {
    type Real = f64;

    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }
    fn one() -> Self {
        C64::new(1.0, 0.0)
    }
    fn i() -> Self {
        C64::new(0.0, 1.0)
    }
    fn from_parts(re: f64, im: f64) -> Self {
        C64::new(re, im)
    }
    fn re(&self) -> f64 {
        self.re
    }
    fn im(&self) -> f64 {
        self.im
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl ComplexScalar for CRat {
    type Real = BigRational;

    fn zero() -> Self {
        Complex::new(RealScalar::zero(), RealScalar::zero())
    }
    fn one() -> Self {
        Complex::new(RealScalar::one(), RealScalar::zero())
    }
    fn i() -> Self {
        Complex::new(RealScalar::zero(), RealScalar::one())
    }
    fn from_parts(re: BigRational, im: BigRational) -> Self {
        Complex::new(re, im)
    }
    fn re(&self) -> BigRational {
        self.re.clone()
    }
    fn im(&self) -> BigRational {
        self.im.clone()
    }
    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
}

/// Rational-component string, e.g. `"-1/2+3/4i"`, for golden tests.
pub fn rational_string(z: &CRat) -> String {
    let im = &z.im;
    if im >= &<BigRational as RealScalar>::zero() {
        format!("{}+{}i", z.re, im)
    } else {
        format!("{}{}i", z.re, im)
    }
}

/// 2x2 matrix over a complex scalar.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat2<S>(pub [[S; 2]; 2]);

impl<S: ComplexScalar> Mat2<S> {
    pub fn zero() -> Self {
        Mat2([[S::zero(), S::zero()], [S::zero(), S::zero()]])
    }

    pub fn identity() -> Self {
        Mat2([[S::one(), S::zero()], [S::zero(), S::one()]])
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for r in 0..2 {
            for c in 0..2 {
                out.0[r][c] = self.0[r][c].add(&other.0[r][c]);
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for r in 0..2 {
            for c in 0..2 {
                out.0[r][c] = self.0[r][c].sub(&other.0[r][c]);
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero();
        for r in 0..2 {
            for c in 0..2 {
                out.0[r][c] = self.0[r][c].neg();
            }
        }
        out
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = Self::zero();
        for r in 0..2 {
            for c in 0..2 {
                out.0[r][c] = self.0[r][c].mul(s);
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for r in 0..2 {
            for c in 0..2 {
                let mut acc = S::zero();
                for k in 0..2 {
                    acc = acc.add(&self.0[r][k].mul(&other.0[k][c]));
                }
                out.0[r][c] = acc;
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Mat2([
            [self.0[0][0].conj(), self.0[1][0].conj()],
            [self.0[0][1].conj(), self.0[1][1].conj()],
        ])
    }

    pub fn trace(&self) -> S {
        self.0[0][0].add(&self.0[1][1])
    }

    pub fn apply(&self, v: &[S; 2]) -> [S; 2] {
        [
            self.0[0][0].mul(&v[0]).add(&self.0[0][1].mul(&v[1])),
            self.0[1][0].mul(&v[0]).add(&self.0[1][1].mul(&v[1])),
        ]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|row| row.iter().all(|e| e.is_zero()))
    }

    /// Max entry magnitude after conversion to doubles.
    pub fn max_abs_f64(&self) -> f64 {
        let mut m: f64 = 0.0;
        for row in &self.0 {
            for e in row {
                m = m.max(e.to_c64().norm());
            }
        }
        m
    }
}

/// 4x4 matrix over a complex scalar, in the block layout
/// rows/cols 0..2 = `W+`, 2..4 = `W-`.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat4<S>(pub [[S; 4]; 4]);

impl<S: ComplexScalar> Mat4<S> {
    pub fn zero() -> Self {
        Mat4(std::array::from_fn(|_| std::array::from_fn(|_| S::zero())))
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for d in 0..4 {
            m.0[d][d] = S::one();
        }
        m
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for r in 0..4 {
            for c in 0..4 {
                out.0[r][c] = self.0[r][c].add(&other.0[r][c]);
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for r in 0..4 {
            for c in 0..4 {
                out.0[r][c] = self.0[r][c].sub(&other.0[r][c]);
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero();
        for r in 0..4 {
            for c in 0..4 {
                out.0[r][c] = self.0[r][c].neg();
            }
        }
        out
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = Self::zero();
        for r in 0..4 {
            for c in 0..4 {
                out.0[r][c] = self.0[r][c].mul(s);
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for r in 0..4 {
            for c in 0..4 {
                let mut acc = S::zero();
                for k in 0..4 {
                    acc = acc.add(&self.0[r][k].mul(&other.0[k][c]));
                }
                out.0[r][c] = acc;
            }
        }
        out
    }

    pub fn apply(&self, v: &[S; 4]) -> [S; 4] {
        std::array::from_fn(|r| {
            let mut acc = S::zero();
            for c in 0..4 {
                acc = acc.add(&self.0[r][c].mul(&v[c]));
            }
            acc
        })
    }

    /// 2x2 block; `(r, c)` index the `W+`/`W-` row and column blocks.
    pub fn block(&self, r: usize, c: usize) -> Mat2<S> {
        let (r0, c0) = (2 * r, 2 * c);
        Mat2([
            [self.0[r0][c0].clone(), self.0[r0][c0 + 1].clone()],
            [self.0[r0 + 1][c0].clone(), self.0[r0 + 1][c0 + 1].clone()],
        ])
    }

    pub fn set_block(&mut self, r: usize, c: usize, b: &Mat2<S>) {
        let (r0, c0) = (2 * r, 2 * c);
        for i in 0..2 {
            for j in 0..2 {
                self.0[r0 + i][c0 + j] = b.0[i][j].clone();
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|row| row.iter().all(|e| e.is_zero()))
    }

    pub fn max_abs_f64(&self) -> f64 {
        let mut m: f64 = 0.0;
        for row in &self.0 {
            for e in row {
                m = m.max(e.to_c64().norm());
            }
        }
        m
    }
}
