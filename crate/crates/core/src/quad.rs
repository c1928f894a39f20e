//! Globally adaptive 21-point Gauss–Kronrod quadrature.
//!
//! The interval with the largest error estimate is bisected until the summed
//! estimate drops below `max(abs_tol, rel_tol * |I|)`. Error estimates follow
//! the QUADPACK rescaling of `|K21 - G10|`.

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_2,
    0.0,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_36,
    0.295_524_224_714_752_87,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_73,
    0.054_755_896_574_352,
    0.075_039_674_810_919_95,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_85,
    0.134_709_217_311_473_33,
    0.142_775_938_577_060_08,
    0.147_739_104_901_338_5,
    0.149_445_554_002_916_9,
];

/// Tolerances for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 0.0,
            max_intervals: 2000,
        }
    }
}

impl Quadrature {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 {
            res_asc * scale
        } else {
            res_asc
        };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

fn kronrod21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);
    let mut res_k = f_center * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (f_center - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let scale = half.abs();
    Segment {
        a,
        b,
        value: res_k * half,
        error: rescale_error((res_k - res_g) * half, res_abs * scale, res_asc * scale),
    }
}

/// Integrates `f` over `[a, b]`. Returns an error carrying the best estimate
/// when the tolerance cannot be met within `max_intervals` bisections.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, opts: Quadrature) -> Result<QuadResult> {
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            error: 0.0,
            intervals: 0,
        });
    }
    let mut segments = vec![kronrod21(&f, a, b)];
    loop {
        let (value, error) = segments
            .iter()
            .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
        if !value.is_finite() {
            return Err(Error::Quadrature {
                estimate: value,
                error,
                intervals: segments.len(),
            });
        }
        let target = opts.abs_tol.max(opts.rel_tol * value.abs());
        if error <= target {
            return Ok(QuadResult {
                value,
                error,
                intervals: segments.len(),
            });
        }
        if segments.len() >= opts.max_intervals {
            return Err(Error::Quadrature {
                estimate: value,
                error,
                intervals: segments.len(),
            });
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let seg = segments.swap_remove(worst);
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a.min(seg.b) || mid >= seg.a.max(seg.b) {
            // interval can no longer be split in floating point
            return Err(Error::Quadrature {
                estimate: value,
                error,
                intervals: segments.len() + 1,
            });
        }
        segments.push(kronrod21(&f, seg.a, mid));
        segments.push(kronrod21(&f, mid, seg.b));
    }
}

/// Integrates `f` over `[a, b]` when `f` has a square-root type endpoint
/// behaviour at `b`, e.g. `sqrt(b - x)` or `1/sqrt(b - x)`.
///
/// Uses `x = b - t^2`, which turns both into smooth integrands in `t`.
pub fn integrate_sqrt_right<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    opts: Quadrature,
) -> Result<QuadResult> {
    if b <= a {
        return Ok(QuadResult {
            value: 0.0,
            error: 0.0,
            intervals: 0,
        });
    }
    let span = (b - a).sqrt();
    integrate(|t| 2.0 * t * f(b - t * t), 0.0, span, opts)
}

/// Mirror image of [`integrate_sqrt_right`]: square-root behaviour at `a`.
pub fn integrate_sqrt_left<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    opts: Quadrature,
) -> Result<QuadResult> {
    if b <= a {
        return Ok(QuadResult {
            value: 0.0,
            error: 0.0,
            intervals: 0,
        });
    }
    let span = (b - a).sqrt();
    integrate(|t| 2.0 * t * f(a + t * t), 0.0, span, opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x| x.powi(5) - 3.0 * x, 0.0, 2.0, Quadrature::default()).unwrap();
        assert!((r.value - (64.0 / 6.0 - 6.0)).abs() < 1e-13);
    }

    #[test]
    fn oscillatory_integrand() {
        let opts = Quadrature {
            abs_tol: 1e-12,
            ..Quadrature::default()
        };
        let r = integrate(|x| (50.0 * x).sin(), 0.0, std::f64::consts::PI, opts).unwrap();
        assert!(r.value.abs() < 1e-11);
        let r = integrate(
            |x| (50.0 * x).cos().powi(2),
            0.0,
            std::f64::consts::PI,
            Quadrature::default(),
        )
        .unwrap();
        assert!((r.value - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn sqrt_endpoint_substitution() {
        // ∫_0^1 dx / sqrt(1 - x) = 2
        let r = integrate_sqrt_right(|x| 1.0 / (1.0 - x).sqrt(), 0.0, 1.0, Quadrature::default())
            .unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);
        let l = integrate_sqrt_left(|x| 1.0 / x.sqrt(), 0.0, 4.0, Quadrature::default()).unwrap();
        assert!((l.value - 4.0).abs() < 1e-12);
    }

    #[test]
    fn reversed_interval_flips_sign() {
        let fwd = integrate(f64::exp, 0.0, 1.0, Quadrature::default()).unwrap();
        let rev = integrate(f64::exp, 1.0, 0.0, Quadrature::default()).unwrap();
        assert!((fwd.value + rev.value).abs() < 1e-14);
    }

    #[test]
    fn non_convergence_is_reported() {
        let opts = Quadrature {
            max_intervals: 3,
            ..Quadrature::default()
        };
        assert!(integrate(|x| 1.0 / x, 1e-300, 1.0, opts).is_err());
    }
}
