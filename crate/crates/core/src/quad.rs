//! Adaptive quadrature used by the Lévy-representation oracle, the inversion
//! formulas and the centering integrals.
//!
//! Everything is built on a 21-point Gauss–Kronrod panel with global
//! bisection of the worst subinterval. Integrands are complex valued; real
//! integrals go through [`integrate_real`].

use num_complex::Complex;

use crate::real::Real;

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_980_222_113,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
// 10-point Gauss weights at XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

const MAX_INTERVALS: usize = 4000;

/// Requested accuracy: the routine stops once `error <= max(abs, rel * |value|)`.
#[derive(Debug, Clone, Copy)]
pub struct Tolerance<T> {
    pub abs: T,
    pub rel: T,
}

impl<T: Real> Tolerance<T> {
    pub fn new(abs: T, rel: T) -> Self {
        Self { abs, rel }
    }

    pub fn abs(abs: T) -> Self {
        Self { abs, rel: T::zero() }
    }

    fn target(&self, value: T) -> T {
        self.abs.max(self.rel * value).max(T::min_positive_value())
    }
}

/// Integral value together with its error estimate.
#[derive(Debug, Clone, Copy)]
pub struct Quad<V, T> {
    pub value: V,
    pub error: T,
}

#[derive(Clone, Copy)]
struct Panel<T> {
    a: T,
    b: T,
    value: Complex<T>,
    error: T,
}

fn kronrod<T: Real, F>(f: &mut F, a: T, b: T) -> (Complex<T>, T)
where
    F: FnMut(T) -> Complex<T>,
{
    let half = (b - a) / T::c(2.0);
    let centre = (a + b) / T::c(2.0);
    let fc = f(centre);
    let mut resk = fc * T::c(WGK[10]);
    let mut resg = Complex::new(T::zero(), T::zero());
    let mut fv = [Complex::new(T::zero(), T::zero()); 20];
    for j in 0..10 {
        let dx = half * T::c(XGK[j]);
        let f1 = f(centre - dx);
        let f2 = f(centre + dx);
        fv[2 * j] = f1;
        fv[2 * j + 1] = f2;
        resk = resk + (f1 + f2) * T::c(WGK[j]);
        if j % 2 == 1 {
            resg = resg + (f1 + f2) * T::c(WG[j / 2]);
        }
    }
    // QUADPACK-style error scaling, applied per component.
    let mean = resk * T::c(0.5);
    let scale = |re: bool| {
        let pick = |z: Complex<T>| if re { z.re } else { z.im };
        let m = pick(mean);
        let mut asc = T::c(WGK[10]) * (pick(fc) - m).abs();
        let mut abs = T::c(WGK[10]) * pick(fc).abs();
        for j in 0..10 {
            let w = T::c(WGK[j]);
            asc = asc + w * ((pick(fv[2 * j]) - m).abs() + (pick(fv[2 * j + 1]) - m).abs());
            abs = abs + w * (pick(fv[2 * j]).abs() + pick(fv[2 * j + 1]).abs());
        }
        let diff = (pick(resk) - pick(resg)).abs() * half.abs();
        let asc = asc * half.abs();
        let abs = abs * half.abs();
        let mut err = diff;
        if asc > T::zero() && diff > T::zero() {
            let r = (T::c(200.0) * diff / asc).powf(T::c(1.5));
            err = asc * r.min(T::one());
        }
        let floor = T::c(50.0) * T::epsilon() * abs;
        if abs > T::min_positive_value() / (T::c(50.0) * T::epsilon()) {
            err = err.max(floor);
        }
        err
    };
    let err = scale(true) + scale(false);
    (resk * half, err)
}

/// Adaptive integral of a complex-valued function over a finite interval.
pub fn integrate<T: Real, F>(mut f: F, a: T, b: T, tol: Tolerance<T>) -> Quad<Complex<T>, T>
where
    F: FnMut(T) -> Complex<T>,
{
    if a == b {
        return Quad { value: Complex::new(T::zero(), T::zero()), error: T::zero() };
    }
    let (v, e) = kronrod(&mut f, a, b);
    let mut panels = vec![Panel { a, b, value: v, error: e }];
    let mut total = v;
    let mut total_err = e;
    while total_err > tol.target(total.norm()) && panels.len() < MAX_INTERVALS {
        let (worst, _) = panels
            .iter()
            .enumerate()
            .fold((0, T::neg_infinity()), |acc, (i, p)| if p.error > acc.1 { (i, p.error) } else { acc });
        let p = panels.swap_remove(worst);
        let mid = (p.a + p.b) / T::c(2.0);
        if mid <= p.a.min(p.b) || mid >= p.a.max(p.b) {
            // Interval exhausted at machine resolution.
            panels.push(p);
            break;
        }
        let (v1, e1) = kronrod(&mut f, p.a, mid);
        let (v2, e2) = kronrod(&mut f, mid, p.b);
        panels.push(Panel { a: p.a, b: mid, value: v1, error: e1 });
        panels.push(Panel { a: mid, b: p.b, value: v2, error: e2 });
        total = panels.iter().fold(Complex::new(T::zero(), T::zero()), |s, p| s + p.value);
        total_err = panels.iter().fold(T::zero(), |s, p| s + p.error);
    }
    Quad { value: total, error: total_err }
}

/// Adaptive integral of a real function over a finite interval.
pub fn integrate_real<T: Real, F>(mut f: F, a: T, b: T, tol: Tolerance<T>) -> Quad<T, T>
where
    F: FnMut(T) -> T,
{
    let q = integrate(|x| Complex::new(f(x), T::zero()), a, b, tol);
    Quad { value: q.value.re, error: q.error }
}

/// ∫_a^∞ f via the map x = a + (1 - s)/s.
pub fn integrate_semi_infinite<T: Real, F>(mut f: F, a: T, tol: Tolerance<T>) -> Quad<Complex<T>, T>
where
    F: FnMut(T) -> Complex<T>,
{
    integrate(
        |s: T| {
            let x = a + (T::one() - s) / s;
            let v = f(x);
            if v.re == T::zero() && v.im == T::zero() {
                v
            } else {
                v / (s * s)
            }
        },
        T::zero(),
        T::one(),
        tol,
    )
}

pub fn integrate_semi_infinite_real<T: Real, F>(mut f: F, a: T, tol: Tolerance<T>) -> Quad<T, T>
where
    F: FnMut(T) -> T,
{
    let q = integrate_semi_infinite(|x| Complex::new(f(x), T::zero()), a, tol);
    Quad { value: q.value.re, error: q.error }
}

/// ∫_0^upper f(y) dy through y = upper·e^{-w}; tames integrable power and
/// logarithmic singularities at the origin.
pub fn integrate_from_zero<T: Real, F>(mut f: F, upper: T, tol: Tolerance<T>) -> Quad<Complex<T>, T>
where
    F: FnMut(T) -> Complex<T>,
{
    integrate_semi_infinite(
        |w: T| {
            let y = upper * (-w).exp();
            let zero = Complex::new(T::zero(), T::zero());
            if y <= T::zero() {
                return zero;
            }
            // Overflow of an integrable singularity deep in the transformed tail.
            let v = f(y) * y;
            if v.re.is_finite() && v.im.is_finite() {
                v
            } else {
                zero
            }
        },
        T::zero(),
        tol,
    )
}

pub fn integrate_from_zero_real<T: Real, F>(mut f: F, upper: T, tol: Tolerance<T>) -> Quad<T, T>
where
    F: FnMut(T) -> T,
{
    let q = integrate_from_zero(|y| Complex::new(f(y), T::zero()), upper, tol);
    Quad { value: q.value.re, error: q.error }
}

/// Wynn's ε-algorithm on a sequence of partial sums; returns the deepest
/// even-column estimate.
pub fn wynn_epsilon<T: Real>(sums: &[T]) -> T {
    let n = sums.len();
    if n < 3 {
        return *sums.last().unwrap_or(&T::zero());
    }
    let mut prev = vec![T::zero(); n + 1];
    let mut cur = sums.to_vec();
    let mut best = sums[n - 1];
    for k in 1..n {
        let mut next = Vec::with_capacity(n - k);
        for j in 0..n - k {
            let diff = cur[j + 1] - cur[j];
            if diff.abs() <= T::epsilon() * T::epsilon() * (T::one() + cur[j + 1].abs()) {
                return best;
            }
            next.push(prev[j + 1] + diff.recip());
        }
        if k % 2 == 0 {
            let candidate = *next.last().expect("non-empty column");
            if !candidate.is_finite() {
                return best;
            }
            best = candidate;
        }
        prev = cur;
        cur = next;
    }
    best
}

const WYNN_WINDOW: usize = 21;
const MAX_PANELS: usize = 20_000;

/// ∫_a^∞ g(t) e^{iωt} dt for a smooth, eventually monotone amplitude `g`.
///
/// The range is cut into half-periods π/|ω|; the partial sums alternate and
/// are extrapolated with Wynn's ε-algorithm. When `cutoff` is given the
/// integration stops there and the caller owns the remaining tail.
pub fn oscillatory_tail<T: Real, F>(
    mut g: F,
    a: T,
    omega: T,
    tol: Tolerance<T>,
    cutoff: Option<T>,
) -> Quad<Complex<T>, T>
where
    F: FnMut(T) -> Complex<T>,
{
    if omega == T::zero() {
        return match cutoff {
            Some(c) => integrate(&mut g, a, c.max(a), tol),
            None => integrate_semi_infinite(&mut g, a, tol),
        };
    }
    let period = T::PI() / omega.abs();
    let panel_tol = Tolerance::new(tol.abs * T::c(0.05), tol.rel * T::c(0.05));
    let mut re_sums = Vec::new();
    let mut im_sums = Vec::new();
    let mut total = Complex::new(T::zero(), T::zero());
    let mut quad_err = T::zero();
    let mut estimates: Vec<Complex<T>> = Vec::new();
    let mut small_run = 0;
    for k in 0..MAX_PANELS {
        let lo = a + period * T::from_count(k);
        if let Some(c) = cutoff {
            if lo >= c {
                return Quad { value: total, error: quad_err };
            }
        }
        let mut hi = lo + period;
        if let Some(c) = cutoff {
            hi = hi.min(c);
        }
        let q = integrate(|t| g(t) * Complex::new(T::zero(), omega * t).exp(), lo, hi, panel_tol);
        total = total + q.value;
        quad_err = quad_err + q.error;
        re_sums.push(total.re);
        im_sums.push(total.im);

        let target = tol.target(total.norm());
        if q.value.norm() <= target * T::c(0.01) {
            small_run += 1;
            if small_run >= 3 {
                return Quad { value: total, error: quad_err + q.value.norm() };
            }
        } else {
            small_run = 0;
        }
        if k >= 4 {
            let start = re_sums.len().saturating_sub(WYNN_WINDOW);
            let mut len = re_sums.len() - start;
            if len % 2 == 0 {
                len -= 1;
            }
            let from = re_sums.len() - len;
            let est = Complex::new(wynn_epsilon(&re_sums[from..]), wynn_epsilon(&im_sums[from..]));
            estimates.push(est);
            let m = estimates.len();
            if m >= 3 {
                let d1 = (estimates[m - 1] - estimates[m - 2]).norm();
                let d2 = (estimates[m - 1] - estimates[m - 3]).norm();
                let err = d1.max(d2) + quad_err;
                if err <= tol.target(est.norm()) {
                    return Quad { value: est, error: err };
                }
            }
        }
    }
    let m = estimates.len();
    let last = *estimates.last().unwrap_or(&total);
    let spread = if m >= 2 { (estimates[m - 1] - estimates[m - 2]).norm() } else { T::infinity() };
    Quad { value: last, error: spread + quad_err }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_exact() {
        let q = integrate_real(|x: f64| x * x, 0.0, 3.0, Tolerance::abs(1e-14));
        assert_abs_diff_eq!(q.value, 9.0, epsilon = 1e-13);
    }

    #[test]
    fn endpoint_singularity() {
        let q = integrate_from_zero_real(|x: f64| x.powf(-0.9), 1.0, Tolerance::new(1e-13, 1e-13));
        assert_abs_diff_eq!(q.value, 10.0, epsilon = 1e-10);
    }

    #[test]
    fn semi_infinite_exponential() {
        let q = integrate_semi_infinite_real(|x: f64| (-x).exp(), 0.0, Tolerance::new(1e-14, 1e-14));
        assert_abs_diff_eq!(q.value, 1.0, epsilon = 1e-13);
    }

    #[test]
    fn wynn_accelerates_alternating_series() {
        // log 2 = 1 - 1/2 + 1/3 - ...
        let mut s = 0.0;
        let sums: Vec<f64> = (1..=15)
            .map(|k| {
                s += if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64;
                s
            })
            .collect();
        assert_abs_diff_eq!(wynn_epsilon(&sums), 2f64.ln(), epsilon = 1e-11);
    }

    #[test]
    fn oscillatory_power_tail() {
        // ∫_1^∞ sin(y)/y² dy = sin 1 - Ci(1)
        let q = oscillatory_tail(
            |y: f64| Complex::new(1.0 / (y * y), 0.0),
            1.0,
            1.0,
            Tolerance::new(1e-13, 1e-13),
            None,
        );
        let expected = 1f64.sin() - crate::special::cosine_integral(1.0);
        assert_abs_diff_eq!(q.value.im, expected, epsilon = 1e-11);
    }

    #[test]
    fn oscillatory_slow_decay() {
        // ∫_0^∞ e^{iy} y^{-1/2} dy = √π e^{iπ/4}; split off [0,1].
        let near = integrate_from_zero(
            |y: f64| Complex::new(0.0, y).exp() / y.sqrt(),
            1.0,
            Tolerance::new(1e-13, 1e-13),
        );
        let far = oscillatory_tail(
            |y: f64| Complex::new(y.powf(-0.5), 0.0),
            1.0,
            1.0,
            Tolerance::new(1e-12, 1e-12),
            None,
        );
        let v = near.value + far.value;
        let expected = Complex::from_polar(PI.sqrt(), PI / 4.0);
        assert!((v - expected).norm() < 1e-9, "{v} vs {expected}");
    }
}
