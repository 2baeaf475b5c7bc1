//! Exact arithmetic for intersection forms and the index bounds that
//! constrain them.
//!
//! Forms are symmetric integer matrices. The two building blocks are the
//! even unimodular rank-8 form of the exceptional Dynkin graph (taken
//! negative definite, so that two copies plus three hyperbolic planes have
//! signature -16) and the hyperbolic plane `H = [[0,1],[1,0]]`. Signatures
//! come from exact rational inertia (symmetric Gaussian elimination with
//! pivoting), never from floating-point eigenvalues; determinants from the
//! same elimination; divisibility facts from arbitrary-precision integers.

use crate::error::{Result, SwtError};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Symmetric square integer matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegerForm {
    m: Vec<Vec<i64>>,
}

impl IntegerForm {
    pub fn from_matrix(m: Vec<Vec<i64>>) -> Result<Self> {
        let n = m.len();
        if m.iter().any(|row| row.len() != n) {
            return Err(SwtError::InvalidArgument("form matrix must be square".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if m[i][j] != m[j][i] {
                    return Err(SwtError::InvalidArgument(format!(
                        "form matrix must be symmetric (entries ({i},{j}) and ({j},{i}) differ)"
                    )));
                }
            }
        }
        Ok(IntegerForm { m })
    }

    pub fn rank(&self) -> usize {
        self.m.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.m[i][j]
    }

    pub fn matrix(&self) -> &Vec<Vec<i64>> {
        &self.m
    }

    /// The rank-8 even form of the exceptional Dynkin graph, negative
    /// definite: diagonal -2, +1 on graph edges (a chain of seven nodes with
    /// the eighth attached to the fifth).
    pub fn e8() -> Self {
        Self::e8_signed(false)
    }

    /// Positive-definite mirror of [`Self::e8`].
    pub fn e8_positive() -> Self {
        Self::e8_signed(true)
    }

    fn e8_signed(positive: bool) -> Self {
        let s: i64 = if positive { 1 } else { -1 };
        let mut m = vec![vec![0i64; 8]; 8];
        for (d, row) in m.iter_mut().enumerate() {
            row[d] = 2 * s;
        }
        let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)];
        for &(i, j) in &edges {
            m[i][j] = -s;
            m[j][i] = -s;
        }
        IntegerForm { m }
    }

    /// The hyperbolic plane `[[0, 1], [1, 0]]`.
    pub fn hyperbolic() -> Self {
        IntegerForm {
            m: vec![vec![0, 1], vec![1, 0]],
        }
    }

    pub fn direct_sum(&self, other: &IntegerForm) -> IntegerForm {
        let n = self.rank();
        let k = other.rank();
        let mut m = vec![vec![0i64; n + k]; n + k];
        for i in 0..n {
            m[i][..n].copy_from_slice(&self.m[i]);
        }
        for i in 0..k {
            for j in 0..k {
                m[n + i][n + j] = other.m[i][j];
            }
        }
        IntegerForm { m }
    }

    /// `2k` copies of the rank-8 form plus `l` hyperbolic planes.
    pub fn spin_form(k: usize, l: usize) -> Self {
        let mut acc = IntegerForm { m: Vec::new() };
        let e8 = Self::e8();
        for _ in 0..2 * k {
            acc = acc.direct_sum(&e8);
        }
        let h = Self::hyperbolic();
        for _ in 0..l {
            acc = acc.direct_sum(&h);
        }
        acc
    }

    /// `v^T Q v` exactly.
    pub fn evaluate(&self, v: &[i64]) -> i64 {
        let n = self.rank();
        assert_eq!(v.len(), n, "vector length must match the rank");
        let mut acc: i128 = 0;
        for i in 0..n {
            for j in 0..n {
                acc += (v[i] as i128) * (self.m[i][j] as i128) * (v[j] as i128);
            }
        }
        i64::try_from(acc).expect("quadratic value fits in i64")
    }

    /// A form is even iff every diagonal entry is (then `q(a,a)` is even for
    /// all integer vectors).
    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.m[i][i] % 2 == 0)
    }

    /// `c` is characteristic iff `c . a = a . a (mod 2)` for every `a`,
    /// equivalently `(Qc)_i = q_ii (mod 2)` componentwise.
    pub fn is_characteristic(&self, c: &[i64]) -> bool {
        let n = self.rank();
        assert_eq!(c.len(), n);
        (0..n).all(|i| {
            let qc: i64 = (0..n).map(|j| self.m[i][j].wrapping_mul(c[j])).sum();
            (qc - self.m[i][i]) % 2 == 0
        })
    }

    fn rational_copy(&self) -> Vec<Vec<BigRational>> {
        self.m
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&e| BigRational::from_integer(BigInt::from(e)))
                    .collect()
            })
            .collect()
    }

    /// Exact inertia: (positive, zero, negative) pivot counts of the
    /// symmetric rational elimination.
    pub fn inertia(&self) -> (usize, usize, usize) {
        let n = self.rank();
        let mut a = self.rational_copy();
        let (mut pos, mut neg) = (0usize, 0usize);
        let zero = BigRational::zero();
        for k in 0..n {
            if a[k][k].is_zero() {
                // Prefer a nonzero later diagonal entry (symmetric swap).
                if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                    a.swap(k, j);
                    for row in a.iter_mut() {
                        row.swap(k, j);
                    }
                } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                    // Zero diagonal block: add row/col j into k, making the
                    // pivot 2 a_kj.
                    for col in 0..n {
                        let t = a[j][col].clone();
                        a[k][col] += t;
                    }
                    for row in a.iter_mut() {
                        let t = row[j].clone();
                        row[k] += t;
                    }
                } else {
                    continue; // fully zero row: rank deficiency
                }
            }
            let pivot = a[k][k].clone();
            if pivot > zero {
                pos += 1;
            } else {
                neg += 1;
            }
            for i in k + 1..n {
                let factor = &a[i][k] / &pivot;
                if factor.is_zero() {
                    continue;
                }
                for j in k..n {
                    let t = &factor * &a[k][j];
                    a[i][j] -= t;
                }
            }
            // Re-symmetrize the trailing block (row elimination alone leaves
            // the mirrored column entries, which the next pivots never read
            // if we also clear them).
            for j in k + 1..n {
                a[k][j] = zero.clone();
                a[j][k] = zero.clone();
            }
            // Restore symmetry of the trailing block explicitly.
            for i in k + 1..n {
                for j in i + 1..n {
                    let v = a[i][j].clone();
                    a[j][i] = v;
                }
            }
        }
        (pos, n - pos - neg, neg)
    }

    /// Signature = (positive inertia) - (negative inertia), exact.
    pub fn signature(&self) -> i64 {
        let (p, _, n) = self.inertia();
        p as i64 - n as i64
    }

    /// Exact determinant (rational elimination; swaps are simultaneous
    /// row/column swaps and leave the determinant unchanged).
    pub fn determinant(&self) -> BigInt {
        let n = self.rank();
        let mut a = self.rational_copy();
        let mut det = BigRational::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                if let Some(j) = (k + 1..n).find(|&j| !a[j][k].is_zero()) {
                    a.swap(k, j); // unsymmetric row swap: flips the sign
                    det = -det;
                } else {
                    return BigInt::zero();
                }
            }
            let pivot = a[k][k].clone();
            det *= pivot.clone();
            for i in k + 1..n {
                let factor = &a[i][k] / &pivot;
                if factor.is_zero() {
                    continue;
                }
                for j in k..n {
                    let t = &factor * &a[k][j];
                    a[i][j] -= t;
                }
            }
        }
        det.to_integer()
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant().abs() == BigInt::one()
    }

    /// All characteristic vectors in the box `c0 + 2 [-radius, radius]^n`,
    /// where `c0` is the unique mod-2 characteristic solution (the form must
    /// be unimodular so `Q` is invertible mod 2). A bounded search: every
    /// characteristic vector is congruent to `c0` mod 2.
    pub fn characteristic_vectors(&self, radius: i64) -> Result<Vec<Vec<i64>>> {
        let n = self.rank();
        if n > 63 {
            return Err(SwtError::InvalidArgument(
                "characteristic enumeration supports rank <= 63".into(),
            ));
        }
        // Solve Q c = diag(Q) over GF(2).
        let mut rows: Vec<u64> = Vec::with_capacity(n);
        let mut rhs: Vec<bool> = Vec::with_capacity(n);
        for i in 0..n {
            let mut bits = 0u64;
            for j in 0..n {
                if self.m[i][j] & 1 == 1 {
                    bits |= 1 << j;
                }
            }
            rows.push(bits);
            rhs.push(self.m[i][i] & 1 == 1);
        }
        let mut c0 = vec![0i64; n];
        let mut pivot_of_col = vec![usize::MAX; n];
        let mut r = 0usize;
        for col in 0..n {
            if let Some(p) = (r..n).find(|&p| rows[p] >> col & 1 == 1) {
                rows.swap(r, p);
                rhs.swap(r, p);
                for i in 0..n {
                    if i != r && rows[i] >> col & 1 == 1 {
                        rows[i] ^= rows[r];
                        rhs[i] ^= rhs[r];
                    }
                }
                pivot_of_col[col] = r;
                r += 1;
            }
        }
        if r < n {
            return Err(SwtError::InvalidArgument(
                "form is singular mod 2 (not unimodular)".into(),
            ));
        }
        for col in 0..n {
            c0[col] = rhs[pivot_of_col[col]] as i64;
        }
        debug_assert!(self.is_characteristic(&c0));

        // Odometer over the box.
        let span = 2 * radius + 1;
        let total = (span as u128).pow(n as u32);
        let mut out = Vec::new();
        let mut counter = vec![-radius; n];
        for _ in 0..total {
            let c: Vec<i64> = (0..n).map(|i| c0[i] + 2 * counter[i]).collect();
            out.push(c);
            for slot in counter.iter_mut() {
                *slot += 1;
                if *slot > radius {
                    *slot = -radius;
                } else {
                    break;
                }
            }
        }
        Ok(out)
    }
}

/// A characteristic element of a unimodular form, with its square.
#[derive(Clone, Debug, PartialEq)]
pub struct CharacteristicClass {
    pub c: Vec<i64>,
    pub square: i64,
}

impl CharacteristicClass {
    pub fn new(form: &IntegerForm, c: Vec<i64>) -> Result<Self> {
        if !form.is_characteristic(&c) {
            return Err(SwtError::InvalidArgument(
                "vector is not characteristic for the form".into(),
            ));
        }
        let square = form.evaluate(&c);
        Ok(CharacteristicClass { c, square })
    }
}

/// Betti-type invariants of a closed oriented 4-manifold with `b1 = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ManifoldInvariants {
    pub chi: i64,
    pub sigma: i64,
    pub b_plus: i64,
    pub b1: i64,
}

impl ManifoldInvariants {
    /// With `b1 = 0`: requires `chi = 2 + b_plus + b_minus` and
    /// `sigma = b_plus - b_minus` with both Betti numbers nonnegative.
    pub fn new(chi: i64, sigma: i64, b_plus: i64) -> Result<Self> {
        let b_minus = b_plus - sigma;
        if b_plus < 0 || b_minus < 0 {
            return Err(SwtError::InvalidArgument(format!(
                "inconsistent invariants: b+ = {b_plus}, b- = {b_minus}"
            )));
        }
        if chi != 2 + b_plus + b_minus {
            return Err(SwtError::InvalidArgument(format!(
                "inconsistent invariants: chi = {chi} but 2 + b+ + b- = {}",
                2 + b_plus + b_minus
            )));
        }
        Ok(ManifoldInvariants {
            chi,
            sigma,
            b_plus,
            b1: 0,
        })
    }
}

/// Expected dimension `[c1^2 - (2 chi + 3 sigma)] / 4` of the solution space,
/// cross-checked against the equivalent form `(c1^2 - sigma)/4 - (1 + b+)`.
pub fn moduli_dimension(c1_squared: i64, inv: &ManifoldInvariants) -> Result<i64> {
    if (c1_squared - inv.sigma).rem_euclid(8) != 0 {
        return Err(SwtError::InvalidArgument(format!(
            "c1^2 = {c1_squared} is not congruent to sigma = {} mod 8 \
             (not the square of a characteristic element)",
            inv.sigma
        )));
    }
    let num = c1_squared - 2 * inv.chi - 3 * inv.sigma;
    if num.rem_euclid(4) != 0 {
        return Err(SwtError::InvalidArgument(format!(
            "c1^2 - (2 chi + 3 sigma) = {num} is not divisible by 4"
        )));
    }
    let d = num / 4;
    let alternate = (c1_squared - inv.sigma) / 4 - (1 + inv.b_plus);
    if d != alternate {
        return Err(SwtError::InvalidArgument(format!(
            "dimension formulas disagree: {d} vs {alternate} (inconsistent invariants)"
        )));
    }
    Ok(d)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FurutaBound {
    pub passes: bool,
    pub min_l: i64,
}

/// For a spin form `2k E8 + l H` with `k >= 1`: `l >= 2k + 1`.
pub fn furuta_bound(k: i64, l: i64) -> Result<FurutaBound> {
    if k < 1 {
        return Err(SwtError::InvalidArgument(
            "bound applies for k >= 1 (k = 0 leaves the form unconstrained)".into(),
        ));
    }
    if l < 0 {
        return Err(SwtError::InvalidArgument("l must be nonnegative".into()));
    }
    let min_l = 2 * k + 1;
    Ok(FurutaBound {
        passes: l >= min_l,
        min_l,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FreedDivisibility {
    pub divides: bool,
    pub equivalent_bound: i64,
}

/// The trace-of-involution divisibility `4^(k+y) 2^x | 4^y 2^(l+x)`, which is
/// independent of `x` and `y` and equivalent to `l >= 2k`. Verified both by
/// exact big-integer division and by the exponent inequality.
pub fn freed_divisibility(k: i64, x: i64, y: i64, l: i64) -> Result<FreedDivisibility> {
    if k < 0 || x < 0 || y < 0 || l < 0 {
        return Err(SwtError::InvalidArgument(
            "all exponents must be nonnegative".into(),
        ));
    }
    let four = BigInt::from(4);
    let two = BigInt::from(2);
    let lhs = four.pow((k + y) as u32) * two.pow(x as u32);
    let rhs = four.pow(y as u32) * two.pow((l + x) as u32);
    let divides_big = (&rhs % &lhs).is_zero();
    let divides_exp = l >= 2 * k;
    if divides_big != divides_exp {
        return Err(SwtError::InvalidArgument(format!(
            "internal inconsistency: big-integer check {divides_big} vs exponent check {divides_exp}"
        )));
    }
    Ok(FreedDivisibility {
        divides: divides_big,
        equivalent_bound: 2 * k,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ElevenEighthsGap {
    pub conjecture_min_l: i64,
    pub furuta_min_l: i64,
    pub gap: i64,
    pub meets_conjecture: bool,
    pub meets_furuta: bool,
}

/// Distance between the conjectured bound `l >= 3k` and the proved
/// `l >= 2k + 1`.
pub fn eleven_eighths_gap(k: i64, l: i64) -> Result<ElevenEighthsGap> {
    if k < 1 {
        return Err(SwtError::InvalidArgument("requires k >= 1".into()));
    }
    let conjecture_min_l = 3 * k;
    let furuta_min_l = 2 * k + 1;
    Ok(ElevenEighthsGap {
        conjecture_min_l,
        furuta_min_l,
        gap: conjecture_min_l - furuta_min_l,
        meets_conjecture: l >= conjecture_min_l,
        meets_furuta: l >= furuta_min_l,
    })
}
