//! Seeded test-field synthesis.
//!
//! All randomness in the crate flows from explicit seeds through ChaCha8, so
//! repeated runs are bit-identical. Band-limited fields are built from a
//! fixed list of low wavevectors with coefficients drawn in a fixed order;
//! the same seed therefore produces the *same continuum field* on lattices of
//! different resolution, which is what grid-refinement order measurements
//! need.

use crate::clifford::{SpinorMinus, SpinorPlus};
use crate::dirac::{SpinorMinusField, SpinorPlusField};
use crate::lattice::{Lattice, OneForm, ScalarField, SelfDualField};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::f64::consts::TAU;

pub type C64 = Complex<f64>;

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// Wavevectors with every component in `-kmax..=kmax`, fixed order.
fn modes(kmax: i32) -> Vec<[i32; 4]> {
    let mut out = Vec::new();
    for k0 in -kmax..=kmax {
        for k1 in -kmax..=kmax {
            for k2 in -kmax..=kmax {
                for k3 in -kmax..=kmax {
                    out.push([k0, k1, k2, k3]);
                }
            }
        }
    }
    out
}

/// One smooth band-limited real function: coefficients for cos and sin of
/// each mode. Evaluation uses the dimensionless site fractions `x_i / n_i`,
/// so the continuum field is resolution-independent.
struct BandLimited {
    coeffs: Vec<([i32; 4], f64, f64)>,
}

impl BandLimited {
    fn draw(rng: &mut ChaCha8Rng, kmax: i32, amplitude: f64) -> Self {
        let ms = modes(kmax);
        let scale = amplitude / (ms.len() as f64).sqrt();
        let coeffs = ms
            .into_iter()
            .map(|k| (k, scale * normal(rng), scale * normal(rng)))
            .collect();
        BandLimited { coeffs }
    }

    fn eval(&self, lat: &Lattice, x: [usize; 4]) -> f64 {
        let dims = lat.dims();
        let xi: [f64; 4] = std::array::from_fn(|i| x[i] as f64 / dims[i] as f64);
        let mut acc = 0.0;
        for (k, a, b) in &self.coeffs {
            let phase = TAU
                * (k[0] as f64 * xi[0]
                    + k[1] as f64 * xi[1]
                    + k[2] as f64 * xi[2]
                    + k[3] as f64 * xi[3]);
            acc += a * phase.cos() + b * phase.sin();
        }
        acc
    }
}

/// Real-valued band-limited scalar field.
pub fn scalar_band_limited(lat: Lattice, seed: u64, kmax: i32, amplitude: f64) -> ScalarField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = BandLimited::draw(&mut rng, kmax, amplitude);
    ScalarField::from_real_fn(lat, |x| f.eval(&lat, x))
}

/// Band-limited real 1-form (independent function per direction).
pub fn one_form_band_limited(lat: Lattice, seed: u64, kmax: i32, amplitude: f64) -> OneForm {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fs: Vec<BandLimited> = (0..4)
        .map(|_| BandLimited::draw(&mut rng, kmax, amplitude))
        .collect();
    OneForm::from_fn(lat, |x| std::array::from_fn(|i| fs[i].eval(&lat, x)))
}

/// Band-limited self-dual field (independent function per coefficient).
pub fn self_dual_band_limited(lat: Lattice, seed: u64, kmax: i32, amplitude: f64) -> SelfDualField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fs: Vec<BandLimited> = (0..3)
        .map(|_| BandLimited::draw(&mut rng, kmax, amplitude))
        .collect();
    SelfDualField::from_fn(lat, |x| std::array::from_fn(|i| fs[i].eval(&lat, x)))
}

/// Band-limited `W+` section (four real functions: re/im of each component).
pub fn spinor_plus_band_limited(
    lat: Lattice,
    seed: u64,
    kmax: i32,
    amplitude: f64,
) -> SpinorPlusField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fs: Vec<BandLimited> = (0..4)
        .map(|_| BandLimited::draw(&mut rng, kmax, amplitude))
        .collect();
    SpinorPlusField::from_fn(lat, |x| {
        SpinorPlus::new(
            C64::new(fs[0].eval(&lat, x), fs[1].eval(&lat, x)),
            C64::new(fs[2].eval(&lat, x), fs[3].eval(&lat, x)),
        )
    })
}

/// Site-independent Gaussian complex scalar field (real-valued).
pub fn scalar_gaussian(lat: Lattice, seed: u64, scale: f64) -> ScalarField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ScalarField::from_real_fn(lat, |_| scale * normal(&mut rng))
}

/// Site-independent Gaussian 1-form.
pub fn one_form_gaussian(lat: Lattice, seed: u64, scale: f64) -> OneForm {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    OneForm::from_fn(lat, |_| std::array::from_fn(|_| scale * normal(&mut rng)))
}

/// Site-independent Gaussian `W+` section.
pub fn spinor_plus_gaussian(lat: Lattice, seed: u64, scale: f64) -> SpinorPlusField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    SpinorPlusField::from_fn(lat, |_| {
        SpinorPlus::new(
            C64::new(scale * normal(&mut rng), scale * normal(&mut rng)),
            C64::new(scale * normal(&mut rng), scale * normal(&mut rng)),
        )
    })
}

/// Site-independent Gaussian `W-` section.
pub fn spinor_minus_gaussian(lat: Lattice, seed: u64, scale: f64) -> SpinorMinusField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    SpinorMinusField::from_fn(lat, |_| {
        SpinorMinus::new(
            C64::new(scale * normal(&mut rng), scale * normal(&mut rng)),
            C64::new(scale * normal(&mut rng), scale * normal(&mut rng)),
        )
    })
}

/// Seeded solver initialization: a unit-variance complex Gaussian spinor
/// scaled by 0.1 and a Gaussian 1-form scaled by 0.1/h, drawn from a single
/// stream.
pub fn initial_state(lat: Lattice, seed: u64) -> (OneForm, SpinorPlusField) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let psi = SpinorPlusField::from_fn(lat, |_| {
        SpinorPlus::new(
            C64::new(0.1 * normal(&mut rng), 0.1 * normal(&mut rng)),
            C64::new(0.1 * normal(&mut rng), 0.1 * normal(&mut rng)),
        )
    });
    let s = 0.1 / lat.h();
    let a = OneForm::from_fn(lat, |_| std::array::from_fn(|_| s * normal(&mut rng)));
    (a, psi)
}
