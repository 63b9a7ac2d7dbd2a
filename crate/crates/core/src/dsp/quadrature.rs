use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{arg_err, Error, Result};

/// Default relative tolerance; PSD leakage values span about 70 dB.
pub const DEFAULT_REL_TOL: f64 = 1e-6;

const MAX_INTERVALS: usize = 20_000;

// Kronrod 15-point abscissae (positive half) and weights; Gauss 7-point
// weights belong to the odd-indexed abscissae.
const XK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn eval<F: Fn(f64) -> f64>(f: &F, x: f64) -> Result<f64> {
    let v = f(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFiniteIntegrand { abscissa: x })
    }
}

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Result<Segment> {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = eval(f, center)?;
    let mut kronrod = fc * WK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XK[j];
        let pair = eval(f, center - dx)? + eval(f, center + dx)?;
        kronrod += WK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Ok(Segment {
        lo,
        hi,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    })
}

/// Adaptive Gauss-Kronrod (7/15) quadrature of `f` over `[lo, hi]`.
///
/// Subdivides the segment with the largest error estimate until the summed
/// error estimate is below `rel_tol * |integral|`. The subdivision order is
/// fixed, so results are deterministic.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, rel_tol: f64) -> Result<f64> {
    integrate_with(f, lo, hi, rel_tol, 0.0)
}

/// [`integrate`] that also stops once the error estimate is below `abs_tol`.
pub fn integrate_with<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, rel_tol: f64, abs_tol: f64) -> Result<f64> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return arg_err(format!("integration bounds must satisfy lo < hi, got [{lo}, {hi}]"));
    }
    if !(rel_tol > 0.0) || !(abs_tol >= 0.0) {
        return arg_err("tolerances must be positive");
    }
    let mut heap = BinaryHeap::new();
    let first = gauss_kronrod(&f, lo, hi)?;
    let mut total = first.value;
    let mut total_err = first.error;
    heap.push(first);

    while total_err > (rel_tol * total.abs()).max(abs_tol) && total_err > f64::MIN_POSITIVE {
        if heap.len() >= MAX_INTERVALS {
            return Err(Error::NoConvergence { lo, hi });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            return Err(Error::NoConvergence { lo, hi });
        }
        let left = gauss_kronrod(&f, worst.lo, mid)?;
        let right = gauss_kronrod(&f, mid, worst.hi)?;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        // Re-sum occasionally so the running totals do not drift.
        if heap.len() % 64 == 0 {
            total = heap.iter().map(|s| s.value).sum();
            total_err = heap.iter().map(|s| s.error).sum();
        }
    }
    Ok(heap.iter().map(|s| s.value).sum())
}

/// [`integrate`] at [`DEFAULT_REL_TOL`].
pub fn integrate_default<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> Result<f64> {
    integrate(f, lo, hi, DEFAULT_REL_TOL)
}
