use libm::{asin, erfc, exp, sin, sqrt};

use crate::error::{ensure, Error, Result};

const FRAC_1_SQRT_2: f64 = core::f64::consts::FRAC_1_SQRT_2;
const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;
const SQRT_2PI: f64 = 2.506_628_274_631_000_7;
const TWO_PI: f64 = 2.0 * core::f64::consts::PI;

/// Standard normal CDF.
#[inline]
pub fn norm_cdf(z: f64) -> f64 {
    0.5 * erfc(-z * FRAC_1_SQRT_2)
}

/// Standard normal density.
#[inline]
pub fn norm_pdf(z: f64) -> f64 {
    FRAC_1_SQRT_2PI * exp(-0.5 * z * z)
}

/// `P(X < x, Y < y)` for standard normals with correlation `corr`.
pub fn binorm_cdf(x: f64, y: f64, corr: f64) -> Result<f64> {
    ensure("corr", corr, corr.abs() < 1.0, "|corr| < 1")?;
    if x.is_nan() {
        return Err(Error::invalid("x", "must not be NaN"));
    }
    if y.is_nan() {
        return Err(Error::invalid("y", "must not be NaN"));
    }
    Ok(bvn_lower(x, y, corr))
}

/// Lower-orthant probability without argument checks. `|corr| >= 1` is
/// mapped to the degenerate limits.
pub(crate) fn bvn_lower(x: f64, y: f64, corr: f64) -> f64 {
    if corr >= 1.0 {
        return norm_cdf(x.min(y));
    }
    if corr <= -1.0 {
        return (norm_cdf(x) - norm_cdf(-y)).max(0.0);
    }
    bvn_upper(-x, -y, corr)
}

// Gauss-Legendre (weight, node) pairs on [-1, 1]; nodes are used as 1 ± x.
#[allow(clippy::excessive_precision)]
const GL6: [(f64, f64); 3] = [
    (0.171_324_492_379_170_5, 0.932_469_514_203_152_2),
    (0.360_761_573_048_138_4, 0.661_209_386_466_264_7),
    (0.467_913_934_572_690_4, 0.238_619_186_083_197_0),
];
#[allow(clippy::excessive_precision)]
const GL12: [(f64, f64); 6] = [
    (0.047_175_336_386_511_77, 0.981_560_634_246_719_1),
    (0.106_939_325_995_318_3, 0.904_117_256_370_475_0),
    (0.160_078_328_543_346_4, 0.769_902_674_194_305_0),
    (0.203_167_426_723_065_9, 0.587_317_954_286_617_1),
    (0.233_492_536_538_354_7, 0.367_831_498_998_180_2),
    (0.249_147_045_813_402_9, 0.125_233_408_511_469_2),
];
#[allow(clippy::excessive_precision)]
const GL20: [(f64, f64); 10] = [
    (0.017_614_007_139_152_12, 0.993_128_599_185_094_9),
    (0.040_601_429_800_386_94, 0.963_971_927_277_913_8),
    (0.062_672_048_334_109_06, 0.912_234_428_251_325_9),
    (0.083_276_741_576_704_75, 0.839_116_971_822_218_8),
    (0.101_930_119_817_240_4, 0.746_331_906_460_150_8),
    (0.118_194_531_961_518_4, 0.636_053_680_726_515_0),
    (0.131_688_638_449_176_6, 0.510_867_001_950_827_1),
    (0.142_096_109_318_382_1, 0.373_706_088_715_419_6),
    (0.149_172_986_472_603_7, 0.227_785_851_141_645_1),
    (0.152_753_387_130_725_9, 0.076_526_521_133_497_33),
];

/// `P(X > h, Y > k)`: Drezner–Wesolowsky integration with Genz's
/// refinements for `|r|` close to one.
fn bvn_upper(h: f64, k: f64, r: f64) -> f64 {
    if h == f64::INFINITY || k == f64::INFINITY {
        return 0.0;
    }
    if h == f64::NEG_INFINITY {
        return norm_cdf(-k);
    }
    if k == f64::NEG_INFINITY {
        return norm_cdf(-h);
    }
    let rule: &[(f64, f64)] = if r.abs() < 0.3 {
        &GL6
    } else if r.abs() < 0.75 {
        &GL12
    } else {
        &GL20
    };
    let mut hk = h * k;
    let mut bvn = 0.0;
    if r.abs() < 0.925 {
        if r != 0.0 {
            let hs = 0.5 * (h * h + k * k);
            let asr = 0.5 * asin(r);
            for &(w, x) in rule {
                for sn in [sin(asr * (1.0 - x)), sin(asr * (1.0 + x))] {
                    bvn += w * exp((sn * hk - hs) / (1.0 - sn * sn));
                }
            }
            bvn *= asr / TWO_PI;
        }
        return (bvn + norm_cdf(-h) * norm_cdf(-k)).clamp(0.0, 1.0);
    }
    let mut k = k;
    if r < 0.0 {
        k = -k;
        hk = -hk;
    }
    if r.abs() < 1.0 {
        let a_s = (1.0 - r) * (1.0 + r);
        let mut a = sqrt(a_s);
        let b_s = (h - k) * (h - k);
        let c = (4.0 - hk) / 8.0;
        let d = (12.0 - hk) / 16.0;
        let asr = -0.5 * (b_s / a_s + hk);
        if asr > -100.0 {
            bvn = a * exp(asr) * (1.0 - c * (b_s - a_s) * (1.0 - d * b_s / 5.0) / 3.0 + c * d * a_s * a_s / 5.0);
        }
        if hk > -100.0 {
            let b = sqrt(b_s);
            let sp = SQRT_2PI * norm_cdf(-b / a);
            bvn -= exp(-0.5 * hk) * sp * b * (1.0 - c * b_s * (1.0 - d * b_s / 5.0) / 3.0);
        }
        a *= 0.5;
        for &(w, x) in rule {
            for sign in [-1.0, 1.0] {
                let xs = (a + a * sign * x) * (a + a * sign * x);
                let rs = sqrt(1.0 - xs);
                let asr = -0.5 * (b_s / xs + hk);
                if asr > -100.0 {
                    let sp = 1.0 + c * xs * (1.0 + d * xs);
                    let ep = exp(-hk * xs / (2.0 * (1.0 + rs) * (1.0 + rs))) / rs;
                    bvn += a * w * exp(asr) * (ep - sp);
                }
            }
        }
        bvn = -bvn / TWO_PI;
    }
    let out = if r > 0.0 {
        bvn + norm_cdf(-h.max(k))
    } else if h >= k {
        -bvn
    } else {
        let l = if h < 0.0 { norm_cdf(k) - norm_cdf(h) } else { norm_cdf(-h) - norm_cdf(-k) };
        l - bvn
    };
    out.clamp(0.0, 1.0)
}
