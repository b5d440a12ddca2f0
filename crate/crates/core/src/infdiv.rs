//! Infinitely divisible laws in Lévy–Khinchin form.
//!
//! A law is a triple (a, b, Λ) together with the centering function h used
//! to define the drift b:
//!
//! log φ(u) = i b u − a u²/2 + ∫ (e^{iux} − 1 − i u h(x)) dΛ(x).
//!
//! The characteristic function here is evaluated by direct quadrature and is
//! kept independent of the closed forms in [`crate::params`], which it checks.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::StableParams;
use crate::quad::{
    integrate_from_zero, integrate_from_zero_real, integrate_semi_infinite_real,
    oscillatory_tail, Quad, Tolerance,
};
use crate::real::{cos_half_pi, sin_pi, Real};
use crate::special::{cosine_integral, exp_integral_e1, gamma, sine_integral};

/// Centering function h with h(x) = x + O(x²) at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HKind {
    /// sin x
    Sin,
    /// x·1{|x| ≤ 1}
    TruncId,
    /// x/(1+x²)
    Rational,
    /// 0; needs ∫(|x|∧1)dΛ < ∞
    Zero,
    /// x; needs ∫(x²∧|x|)dΛ < ∞
    Id,
}

impl Default for HKind {
    fn default() -> Self {
        HKind::Rational
    }
}

impl HKind {
    pub const ALL: [HKind; 5] = [HKind::Sin, HKind::TruncId, HKind::Rational, HKind::Zero, HKind::Id];

    pub fn eval<T: Real>(self, x: T) -> T {
        match self {
            HKind::Sin => x.sin(),
            HKind::TruncId => {
                if x.abs() <= T::one() {
                    x
                } else {
                    T::zero()
                }
            }
            HKind::Rational => x / (T::one() + x * x),
            HKind::Zero => T::zero(),
            HKind::Id => x,
        }
    }

    /// y − h(y) for y > 0, without cancellation near the origin.
    fn deficit<T: Real>(self, y: T) -> T {
        match self {
            HKind::Sin => {
                if y < T::c(0.5) {
                    let y2 = y * y;
                    let mut term = y * y2 / T::c(6.0);
                    let mut sum = term;
                    for k in 1..12 {
                        let kk = T::from_count(2 * k + 2) * T::from_count(2 * k + 3);
                        term = -term * y2 / kk;
                        sum = sum + term;
                    }
                    sum
                } else {
                    y - y.sin()
                }
            }
            HKind::TruncId => {
                if y <= T::one() {
                    T::zero()
                } else {
                    y
                }
            }
            HKind::Rational => y * y * y / (T::one() + y * y),
            HKind::Zero => y,
            HKind::Id => T::zero(),
        }
    }
}

/// Caller-supplied Lévy density on ℝ∖{0}.
#[derive(Clone)]
pub struct GenericDensity<T> {
    pub density: Arc<dyn Fn(T) -> T + Send + Sync>,
    /// ∫(|x|∧1)dΛ < ∞
    pub finite_variation: bool,
    /// ∫(x²∧|x|)dΛ < ∞
    pub integrable_tail: bool,
}

impl<T> fmt::Debug for GenericDensity<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GenericDensity")
            .field("finite_variation", &self.finite_variation)
            .field("integrable_tail", &self.integrable_tail)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone)]
pub enum LevyMeasure<T> {
    /// density c₊x^{−α−1} on x > 0 and c₋|x|^{−α−1} on x < 0
    StablePair { c_plus: T, c_minus: T, alpha: T },
    PointMass { mass: T, at: T },
    /// density αx⁻¹e⁻ˣ on x > 0
    GammaTail { shape: T },
    GenericDensity(GenericDensity<T>),
}

impl<T: Real> LevyMeasure<T> {
    pub fn stable_pair(alpha: T, c_plus: T, c_minus: T) -> Result<Self> {
        if !(alpha > T::zero() && alpha < T::c(2.0)) {
            return Err(Error::InvalidParameter(format!("alpha = {alpha} outside (0, 2)")));
        }
        if !(c_plus >= T::zero() && c_minus >= T::zero()) || c_plus + c_minus == T::zero() {
            return Err(Error::InvalidParameter("need c_plus, c_minus >= 0, not both zero".into()));
        }
        Ok(LevyMeasure::StablePair { c_plus, c_minus, alpha })
    }

    pub fn point_mass(mass: T, at: T) -> Result<Self> {
        if !(mass > T::zero()) || at == T::zero() || !at.is_finite() {
            return Err(Error::InvalidParameter("point mass needs mass > 0 at x != 0".into()));
        }
        Ok(LevyMeasure::PointMass { mass, at })
    }

    pub fn gamma_tail(shape: T) -> Result<Self> {
        if !(shape > T::zero()) {
            return Err(Error::InvalidParameter(format!("shape = {shape} must be positive")));
        }
        Ok(LevyMeasure::GammaTail { shape })
    }

    pub fn generic<F>(density: F, finite_variation: bool, integrable_tail: bool) -> Self
    where
        F: Fn(T) -> T + Send + Sync + 'static,
    {
        LevyMeasure::GenericDensity(GenericDensity { density: Arc::new(density), finite_variation, integrable_tail })
    }

    /// Density at x ≠ 0 (zero for the atomic variant).
    pub fn density(&self, x: T) -> T {
        match self {
            LevyMeasure::StablePair { c_plus, c_minus, alpha } => {
                let c = if x > T::zero() { *c_plus } else { *c_minus };
                c * x.abs().powf(-*alpha - T::one())
            }
            LevyMeasure::PointMass { .. } => T::zero(),
            LevyMeasure::GammaTail { shape } => {
                if x > T::zero() {
                    *shape * (-x).exp() / x
                } else {
                    T::zero()
                }
            }
            LevyMeasure::GenericDensity(g) => (g.density)(x),
        }
    }

    pub fn admits(&self, h: HKind) -> bool {
        match (self, h) {
            (_, HKind::Sin | HKind::TruncId | HKind::Rational) => true,
            (LevyMeasure::PointMass { .. } | LevyMeasure::GammaTail { .. }, _) => true,
            (LevyMeasure::StablePair { alpha, .. }, HKind::Zero) => *alpha < T::one(),
            (LevyMeasure::StablePair { alpha, .. }, HKind::Id) => *alpha > T::one(),
            (LevyMeasure::GenericDensity(g), HKind::Zero) => g.finite_variation,
            (LevyMeasure::GenericDensity(g), HKind::Id) => g.integrable_tail,
        }
    }
}

/// Infinitely divisible law (a, b, Λ) with drift relative to `h`.
#[derive(Debug, Clone)]
pub struct IdTriple<T> {
    pub a: T,
    pub b: T,
    pub levy: Vec<LevyMeasure<T>>,
    pub h: HKind,
}

impl<T: Real> IdTriple<T> {
    pub fn new(a: T, b: T, levy: Option<LevyMeasure<T>>, h: HKind) -> Result<Self> {
        Self::with_measures(a, b, levy.into_iter().collect(), h)
    }

    pub fn with_measures(a: T, b: T, levy: Vec<LevyMeasure<T>>, h: HKind) -> Result<Self> {
        if !(a >= T::zero()) {
            return Err(Error::InvalidParameter(format!("a = {a} must be nonnegative")));
        }
        if levy.iter().any(|m| !m.admits(h)) {
            return Err(Error::InvalidH);
        }
        Ok(IdTriple { a, b, levy, h })
    }

    pub fn gaussian(variance: T, mean: T) -> Result<Self> {
        Self::new(variance, mean, None, HKind::default())
    }
}

/// Feller's canonical measure dM = a·δ₀ + x²dΛ.
#[derive(Debug, Clone)]
pub struct CanonicalMeasure<T> {
    pub atom_at_zero: T,
    /// Λ; the off-zero part of M is x² times this measure.
    pub off_zero: Vec<LevyMeasure<T>>,
}

impl<T: Real> CanonicalMeasure<T> {
    /// Density of M at x ≠ 0.
    pub fn density(&self, x: T) -> T {
        x * x * self.off_zero.iter().map(|m| m.density(x)).sum::<T>()
    }

    /// Density of K, dK = dM/(1+x²), at x ≠ 0.
    pub fn k_density(&self, x: T) -> T {
        self.density(x) / (T::one() + x * x)
    }
}

pub fn canonical_from_levy<T: Real>(a: T, levy: &[LevyMeasure<T>]) -> CanonicalMeasure<T> {
    CanonicalMeasure { atom_at_zero: a, off_zero: levy.to_vec() }
}

pub fn levy_from_canonical<T: Real>(m: &CanonicalMeasure<T>) -> (T, Vec<LevyMeasure<T>>) {
    (m.atom_at_zero, m.off_zero.clone())
}

/// M[x₁, x₂] for x₁ ≤ 0 ≤ x₂.
pub fn interval_mass<T: Real>(m: &CanonicalMeasure<T>, x1: T, x2: T) -> Result<T> {
    if !(x1 <= T::zero() && x2 >= T::zero()) {
        return Err(Error::RangeError("interval must contain the origin".into()));
    }
    let mut total = m.atom_at_zero;
    for part in &m.off_zero {
        match part {
            LevyMeasure::StablePair { c_plus, c_minus, alpha } => {
                let e = T::c(2.0) - *alpha;
                total = total + (*c_plus * x2.powf(e) + *c_minus * (-x1).powf(e)) / e;
            }
            LevyMeasure::PointMass { mass, at } => {
                if *at >= x1 && *at <= x2 {
                    total = total + *mass * *at * *at;
                }
            }
            _ => return Err(Error::UnsupportedVariant),
        }
    }
    Ok(total)
}

/// Λ of a stable law.
pub fn stable_levy<T: Real>(alpha: T, c_plus: T, c_minus: T) -> Result<LevyMeasure<T>> {
    LevyMeasure::stable_pair(alpha, c_plus, c_minus)
}

fn tol<T: Real>() -> Tolerance<T> {
    Tolerance::new(T::c(1e-12).max(T::tol_floor()), T::c(1e-12).max(T::tol_floor()))
}

/// (Λ(x, ∞), Λ(−∞, −x)) for x > 0.
pub fn tail_mass<T: Real>(levy: &LevyMeasure<T>, x: T) -> Result<(T, T)> {
    if !(x > T::zero()) {
        return Err(Error::RangeError("tail mass needs x > 0".into()));
    }
    match levy {
        LevyMeasure::StablePair { c_plus, c_minus, alpha } => {
            let f = x.powf(-*alpha) / *alpha;
            Ok((*c_plus * f, *c_minus * f))
        }
        LevyMeasure::PointMass { mass, at } => {
            let up = if *at > x { *mass } else { T::zero() };
            let lo = if *at < -x { *mass } else { T::zero() };
            Ok((up, lo))
        }
        LevyMeasure::GammaTail { shape } => Ok((*shape * exp_integral_e1(x), T::zero())),
        LevyMeasure::GenericDensity(g) => {
            let up = integrate_semi_infinite_real(|y| (g.density)(y), x, tol());
            let lo = integrate_semi_infinite_real(|y| (g.density)(-y), x, tol());
            Ok((up.value, lo.value))
        }
    }
}

/// S1 parameters (δ = 0) of the stable law with Lévy measure `levy`.
pub fn stable_params_from_measures<T: Real>(levy: &LevyMeasure<T>) -> Result<StableParams<T>> {
    let LevyMeasure::StablePair { c_plus, c_minus, alpha } = *levy else {
        return Err(Error::UnsupportedVariant);
    };
    let sum = c_plus + c_minus;
    let beta = (c_plus - c_minus) / sum;
    let gamma = if alpha == T::one() {
        sum * T::FRAC_PI_2()
    } else {
        (sum * (-gamma(-alpha) * cos_half_pi(alpha))).powf(alpha.recip())
    };
    StableParams::s1(alpha, beta, gamma, T::zero())
}

/// S1 parameters (δ = 0) of the stable law with canonical measure `m`,
/// using the canonical constants C± directly.
pub fn stable_params_from_canonical<T: Real>(m: &CanonicalMeasure<T>) -> Result<StableParams<T>> {
    if m.atom_at_zero != T::zero() {
        return Err(Error::UnsupportedVariant);
    }
    let mut alpha = None;
    let (mut cp, mut cm) = (T::zero(), T::zero());
    for part in &m.off_zero {
        let LevyMeasure::StablePair { c_plus, c_minus, alpha: a } = *part else {
            return Err(Error::UnsupportedVariant);
        };
        if alpha.is_some_and(|prev| prev != a) {
            return Err(Error::UnsupportedVariant);
        }
        alpha = Some(a);
        let e = T::c(2.0) - a;
        cp = cp + c_plus / e;
        cm = cm + c_minus / e;
    }
    let alpha = alpha.ok_or(Error::UnsupportedVariant)?;
    let sum = cp + cm;
    let gamma = if alpha == T::one() {
        sum * T::FRAC_PI_2()
    } else {
        let k = gamma(T::c(3.0) - alpha) / (alpha * (T::one() - alpha));
        (sum * k * cos_half_pi(alpha)).powf(alpha.recip())
    };
    StableParams::s1(alpha, (cp - cm) / sum, gamma, T::zero())
}

/// Centering under which the drift of a stable law equals its S1 location δ:
/// none for α < 1, the identity for α > 1 and the sine at α = 1.
pub fn natural_h<T: Real>(alpha: T) -> HKind {
    if alpha < T::one() {
        HKind::Zero
    } else if alpha > T::one() {
        HKind::Id
    } else {
        HKind::Sin
    }
}

/// Lévy–Khinchin triple of a stable law, centered with [`natural_h`] so that b = δ.
pub fn stable_triple<T: Real>(p: &StableParams<T>) -> Result<IdTriple<T>> {
    let s = p.to_s1()?;
    let (a, b, g, d) = (s.alpha, s.beta, s.gamma, s.delta);
    if a == T::c(2.0) {
        return IdTriple::new(T::c(2.0) * g * g, d, None, HKind::Id);
    }
    let sum = if a == T::one() {
        T::c(2.0) * g / T::PI()
    } else {
        g.powf(a) / (-gamma(-a) * cos_half_pi(a))
    };
    let half = T::c(0.5);
    let levy = LevyMeasure::stable_pair(a, sum * half * (T::one() + b), sum * half * (T::one() - b))?;
    IdTriple::new(T::zero(), d, Some(levy), natural_h(a))
}

/// ∫_0^∞ (h − sin)(y) y^{−α−1} dy
fn stable_shift_constant<T: Real>(h: HKind, alpha: T) -> T {
    let one = T::one();
    let at_one = alpha == one;
    let g = if at_one { T::zero() } else { gamma(-alpha) * sin_pi(alpha / T::c(2.0)) };
    match h {
        HKind::Sin => T::zero(),
        HKind::Zero | HKind::Id => g,
        HKind::TruncId => {
            if at_one {
                T::euler_gamma() - one
            } else {
                (one - alpha).recip() + g
            }
        }
        HKind::Rational => {
            if at_one {
                T::euler_gamma() - one
            } else {
                T::FRAC_PI_2() / cos_half_pi(alpha) + g
            }
        }
    }
}

/// ∫_0^∞ h(x) x⁻¹ e⁻ˣ dx
fn gamma_shift_constant<T: Real>(h: HKind) -> T {
    let one = T::one();
    match h {
        HKind::Sin => T::FRAC_PI_4(),
        HKind::Zero => T::zero(),
        HKind::Id => one,
        HKind::TruncId => one - (-one).exp(),
        HKind::Rational => cosine_integral(one) * one.sin() + (T::FRAC_PI_2() - sine_integral(one)) * one.cos(),
    }
}

/// ∫ (h_new − h_old) dΛ.
fn drift_shift<T: Real>(m: &LevyMeasure<T>, h_old: HKind, h_new: HKind) -> Result<T> {
    if h_old == h_new {
        return Ok(T::zero());
    }
    match m {
        LevyMeasure::StablePair { c_plus, c_minus, alpha } => Ok((*c_plus - *c_minus)
            * (stable_shift_constant(h_new, *alpha) - stable_shift_constant(h_old, *alpha))),
        LevyMeasure::PointMass { mass, at } => Ok(*mass * (h_new.eval(*at) - h_old.eval(*at))),
        LevyMeasure::GammaTail { shape } => {
            Ok(*shape * (gamma_shift_constant::<T>(h_new) - gamma_shift_constant::<T>(h_old)))
        }
        LevyMeasure::GenericDensity(g) => {
            // h is odd, so both half-lines fold onto y > 0.
            let odd = |y: T| (g.density)(y) - (g.density)(-y);
            let near = integrate_from_zero_real(|y| (h_old.deficit(y) - h_new.deficit(y)) * odd(y), T::one(), tol());
            let far_new = h_tail(h_new, odd, T::one());
            let far_old = h_tail(h_old, odd, T::one());
            let v = near.value + far_new.value - far_old.value;
            let err = near.error + far_new.error + far_old.error;
            if !v.is_finite() || err > T::c(1e-8).max(T::accuracy_floor()) * (T::one() + v.abs()) {
                return Err(Error::QuadratureFailure { estimate: err.to_f64_lossy() });
            }
            Ok(v)
        }
    }
}

/// Same law, drift expressed relative to `h_new`.
pub fn rebase_h<T: Real>(t: &IdTriple<T>, h_new: HKind) -> Result<IdTriple<T>> {
    if t.levy.iter().any(|m| !m.admits(h_new)) {
        return Err(Error::InvalidH);
    }
    let mut b = t.b;
    for m in &t.levy {
        b = b + drift_shift(m, t.h, h_new)?;
    }
    Ok(IdTriple { a: t.a, b, levy: t.levy.clone(), h: h_new })
}

/// Componentwise sum: the law of X₁ + X₂ for independent summands.
pub fn id_sum<T: Real>(t1: &IdTriple<T>, t2: &IdTriple<T>) -> Result<IdTriple<T>> {
    if t1.h != t2.h {
        return Err(Error::HMismatch);
    }
    let mut levy = t1.levy.clone();
    levy.extend(t2.levy.iter().cloned());
    Ok(IdTriple { a: t1.a + t2.a, b: t1.b + t2.b, levy, h: t1.h })
}

/// ∫_a^∞ h(y) g(y) dy; the sine case is integrated panel by panel.
fn h_tail<T: Real, G>(h: HKind, g: G, a: T) -> Quad<T, T>
where
    G: Fn(T) -> T,
{
    match h {
        HKind::Sin => {
            let q = oscillatory_tail(|y| Complex::new(g(y), T::zero()), a, T::one(), tol(), None);
            Quad { value: q.value.im, error: q.error }
        }
        HKind::Zero => Quad { value: T::zero(), error: T::zero() },
        HKind::TruncId if a >= T::one() => Quad { value: T::zero(), error: T::zero() },
        HKind::TruncId => integrate_semi_infinite_real(|y| if y <= T::one() { y * g(y) } else { T::zero() }, a, tol()),
        _ => integrate_semi_infinite_real(|y| h.eval(y) * g(y), a, tol()),
    }
}

/// e^{iz} − 1 − iz
fn e_minus<T: Real>(z: T) -> Complex<T> {
    if z.abs() < T::c(0.5) {
        let iz = Complex::new(T::zero(), z);
        let mut term = iz * iz / T::c(2.0);
        let mut sum = term;
        for k in 3..24 {
            term = term * iz / T::from_count(k);
            sum = sum + term;
        }
        sum
    } else {
        Complex::new(z.cos() - T::one(), z.sin() - z)
    }
}

/// ∫_0^∞ (e^{iuy} − 1 − iu h(y)) g(y) dy for a density g on y > 0.
fn half_line_exponent<T: Real, G>(g: G, u: T, h: HKind) -> Quad<Complex<T>, T>
where
    G: Fn(T) -> T,
{
    let zero = Complex::new(T::zero(), T::zero());
    if u == T::zero() {
        return Quad { value: zero, error: T::zero() };
    }
    let split = T::one().min(u.abs().recip());
    let iu = Complex::new(T::zero(), u);
    let near = integrate_from_zero(
        |y| {
            let w = g(y);
            if w == T::zero() {
                return zero;
            }
            (e_minus(u * y) + iu * h.deficit(y)) * w
        },
        split,
        tol(),
    );
    let osc = oscillatory_tail(|y| Complex::new(g(y), T::zero()), split, u, tol(), None);
    let mass = integrate_semi_infinite_real(&g, split, tol());
    let ht = h_tail(h, &g, split);
    let value = near.value + osc.value - Complex::new(mass.value, u * ht.value);
    Quad { value, error: near.error + osc.error + mass.error + u.abs() * ht.error }
}

fn measure_exponent<T: Real>(m: &LevyMeasure<T>, u: T, h: HKind) -> Quad<Complex<T>, T> {
    match m {
        LevyMeasure::PointMass { mass, at } => {
            let v = (Complex::new(T::zero(), u * *at).exp() - T::one() - Complex::new(T::zero(), u * h.eval(*at))) * *mass;
            Quad { value: v, error: T::zero() }
        }
        LevyMeasure::StablePair { c_plus, c_minus, alpha } => {
            let e = -*alpha - T::one();
            let mut value = Complex::new(T::zero(), T::zero());
            let mut error = T::zero();
            if *c_plus > T::zero() {
                let q = half_line_exponent(|y: T| *c_plus * y.powf(e), u, h);
                value = value + q.value;
                error = error + q.error;
            }
            if *c_minus > T::zero() {
                let q = half_line_exponent(|y: T| *c_minus * y.powf(e), -u, h);
                value = value + q.value;
                error = error + q.error;
            }
            Quad { value, error }
        }
        LevyMeasure::GammaTail { shape } => half_line_exponent(|y: T| *shape * (-y).exp() / y, u, h),
        LevyMeasure::GenericDensity(g) => {
            let p = half_line_exponent(|y: T| (g.density)(y), u, h);
            let n = half_line_exponent(|y: T| (g.density)(-y), -u, h);
            Quad { value: p.value + n.value, error: p.error + n.error }
        }
    }
}

/// log φ(u) by quadrature, with its error estimate.
pub fn log_cf_quadrature<T: Real>(t: &IdTriple<T>, u: T) -> Quad<Complex<T>, T> {
    let mut value = Complex::new(-t.a * u * u / T::c(2.0), t.b * u);
    let mut error = T::zero();
    for m in &t.levy {
        let q = measure_exponent(m, u, t.h);
        value = value + q.value;
        error = error + q.error;
    }
    Quad { value, error }
}

/// φ(u)^time evaluated from the Lévy–Khinchin integral.
pub fn cf_quadrature<T: Real>(t: &IdTriple<T>, u: T, time: T) -> Result<Complex<T>> {
    if !(time >= T::zero()) {
        return Err(Error::RangeError("time must be nonnegative".into()));
    }
    let q = log_cf_quadrature(t, u);
    let err = q.error * time;
    if !q.value.re.is_finite() || !q.value.im.is_finite() || err > T::c(1e-8).max(T::accuracy_floor()) {
        return Err(Error::QuadratureFailure { estimate: err.to_f64_lossy() });
    }
    Ok((q.value * time).exp())
}

/// e^{−z} − 1 + z
fn exp_deficit<T: Real>(z: T) -> T {
    if z.abs() < T::c(0.1) {
        let mut term = z * z / T::c(2.0);
        let mut sum = term;
        for k in 3..16 {
            term = -term * z / T::from_count(k);
            sum = sum + term;
        }
        sum
    } else {
        (-z).exp_m1() + z
    }
}

/// ∫_0^∞ (e^{−σy} − 1 + σh(y)) g(y) dy
fn half_line_exp_moment<T: Real, G>(g: G, sigma: T, h: HKind) -> Quad<T, T>
where
    G: Fn(T) -> T,
{
    let split = T::one().min(sigma.abs().recip());
    let near = integrate_from_zero_real(|y| (exp_deficit(sigma * y) - sigma * h.deficit(y)) * g(y), split, tol());
    let far = integrate_semi_infinite_real(
        |y| {
            let w = g(y);
            if w == T::zero() {
                return w;
            }
            (-sigma * y).exp_m1() * w
        },
        split,
        tol(),
    );
    let ht = h_tail(h, &g, split);
    Quad { value: near.value + far.value + sigma * ht.value, error: near.error + far.error + sigma.abs() * ht.error }
}

/// E e^{sX}; `+∞` when the Lévy tail on the side of sgn s is too heavy.
pub fn exp_moment<T: Real>(t: &IdTriple<T>, s: T) -> Result<T> {
    if s == T::zero() {
        return Ok(T::one());
    }
    let mut expo = t.b * s + t.a * s * s / T::c(2.0);
    let mut error = T::zero();
    for m in &t.levy {
        match m {
            LevyMeasure::PointMass { mass, at } => {
                expo = expo + *mass * ((s * *at).exp() - T::one() - s * t.h.eval(*at));
            }
            LevyMeasure::GammaTail { shape } => {
                if s >= T::one() {
                    return Ok(T::infinity());
                }
                expo = expo - *shape * (T::one() - s).ln() - s * *shape * gamma_shift_constant::<T>(t.h);
            }
            LevyMeasure::StablePair { c_plus, c_minus, alpha } => {
                let heavy = if s > T::zero() { *c_plus } else { *c_minus };
                if heavy > T::zero() {
                    return Ok(T::infinity());
                }
                let e = -*alpha - T::one();
                let light = if s > T::zero() { *c_minus } else { *c_plus };
                // The light side sits at −sgn(s)·y with y > 0, decaying like e^{−|s|y}.
                let q = half_line_exp_moment(|y: T| light * y.powf(e), s.abs(), t.h);
                expo = expo + q.value;
                error = error + q.error;
            }
            LevyMeasure::GenericDensity(g) => {
                let p = half_line_exp_moment(|y: T| (g.density)(y), -s, t.h);
                let n = half_line_exp_moment(|y: T| (g.density)(-y), s, t.h);
                let v = p.value + n.value;
                if !v.is_finite() {
                    return Ok(T::infinity());
                }
                expo = expo + v;
                error = error + p.error + n.error;
            }
        }
    }
    if error > T::c(1e-8).max(T::accuracy_floor()) * (T::one() + expo.abs()) {
        return Err(Error::QuadratureFailure { estimate: error.to_f64_lossy() });
    }
    Ok(expo.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::cf;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use std::f64::consts::PI;

    #[test]
    fn point_mass_rebase_to_rational() {
        let lam = 2.5;
        let t = IdTriple::new(0.0, 0.3, Some(LevyMeasure::point_mass(lam, 1.0).unwrap()), HKind::Sin).unwrap();
        let r = rebase_h(&t, HKind::Rational).unwrap();
        assert_abs_diff_eq!(r.b, 0.3 + lam * (0.5 - 1f64.sin()), epsilon = 1e-15);
        assert_eq!(rebase_h(&t, HKind::Sin).unwrap().b, 0.3);
    }

    #[test]
    fn stable_pair_trunc_to_zero() {
        let t = IdTriple::new(0.0, 1.0, Some(stable_levy(0.5, 1.0, 0.0).unwrap()), HKind::TruncId).unwrap();
        let r = rebase_h(&t, HKind::Zero).unwrap();
        assert_abs_diff_eq!(r.b, 1.0 - 2.0, epsilon = 1e-13);
    }

    #[test]
    fn rebase_constants_match_quadrature() {
        let tol = Tolerance::new(1e-13, 1e-13);
        for &alpha in &[0.3, 0.8, 1.0, 1.4, 1.8] {
            for h in HKind::ALL {
                let m = LevyMeasure::stable_pair(alpha, 1.0, 0.0).unwrap();
                if !m.admits(h) {
                    continue;
                }
                // D_h = ∫(h − sin) y^{−α−1} dy, folded into near/far pieces.
                let f = |y: f64| (HKind::Sin.deficit(y) - h.deficit(y)) * y.powf(-alpha - 1.0);
                let near = integrate_from_zero_real(f, 1.0, tol);
                let far = integrate_semi_infinite_real(|y| h.eval(y) * y.powf(-alpha - 1.0), 1.0, tol).value;
                let far = if h == HKind::Sin { 0.0 } else { far };
                let far_osc = oscillatory_tail(|y: f64| Complex::new(y.powf(-alpha - 1.0), 0.0), 1.0, 1.0, tol, None);
                let far_sin = if h == HKind::Sin { far_osc.value.im } else { 0.0 };
                let d = near.value + far + far_sin - far_osc.value.im;
                assert_abs_diff_eq!(stable_shift_constant(h, alpha), d, epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn gamma_constants_match_quadrature() {
        for h in HKind::ALL {
            let q = integrate_from_zero_real(|x: f64| h.eval(x) * (-x).exp() / x, 1.0, Tolerance::abs(1e-14)).value
                + integrate_semi_infinite_real(|x: f64| h.eval(x) * (-x).exp() / x, 1.0, Tolerance::abs(1e-14)).value;
            assert_abs_diff_eq!(gamma_shift_constant::<f64>(h), q, epsilon = 1e-12);
        }
    }

    #[test]
    fn canonical_round_trip_and_density() {
        let m = stable_levy(0.7, 1.3, 0.4).unwrap();
        let cm = canonical_from_levy(0.2, &[m]);
        assert_relative_eq!(cm.density(2.0), 1.3 * 2f64.powf(0.3), max_relative = 1e-14);
        assert_relative_eq!(cm.density(-2.0), 0.4 * 2f64.powf(0.3), max_relative = 1e-14);
        let (a, back) = levy_from_canonical(&cm);
        assert_eq!(a, 0.2);
        assert!(matches!(back[0], LevyMeasure::StablePair { c_plus, .. } if c_plus == 1.3));
        let normal = canonical_from_levy(1.5, &[]);
        assert_eq!(normal.atom_at_zero, 1.5);
        assert_eq!(interval_mass(&normal, -1.0, 1.0).unwrap(), 1.5);
    }

    #[test]
    fn interval_mass_examples() {
        let m = canonical_from_levy(0.0, &[stable_levy(1.0, 1.0, 0.0).unwrap()]);
        assert_abs_diff_eq!(interval_mass(&m, 0.0, 1.0).unwrap(), 1.0, epsilon = 1e-15);
        assert_eq!(interval_mass(&m, 0.0, 0.0).unwrap(), 0.0);
        let m = canonical_from_levy(0.0, &[stable_levy(0.5, 1.0, 1.0).unwrap()]);
        assert_abs_diff_eq!(interval_mass(&m, -1.0, 1.0).unwrap(), 4.0 / 3.0, epsilon = 1e-15);
        let g = canonical_from_levy(0.0, &[LevyMeasure::gamma_tail(1.0).unwrap()]);
        assert_eq!(interval_mass(&g, -1.0, 1.0), Err(Error::UnsupportedVariant));
    }

    #[test]
    fn poisson_cf() {
        let lam = 1.7;
        let t = IdTriple::new(0.0, 0.0, Some(LevyMeasure::point_mass(lam, 1.0).unwrap()), HKind::Zero).unwrap();
        for u in [0.3, 1.0, 4.0] {
            let v = cf_quadrature(&t, u, 1.0).unwrap();
            let e = ((Complex::new(0.0, u).exp() - 1.0) * lam).exp();
            assert_abs_diff_eq!((v - e).norm(), 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn gaussian_cf() {
        for h in HKind::ALL {
            let t = IdTriple::new(2.0, 0.5, None, h).unwrap();
            let v = cf_quadrature(&t, 1.3, 1.0).unwrap();
            let e = Complex::new(-1.69, 0.65).exp();
            assert_abs_diff_eq!((v - e).norm(), 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn gamma_cf() {
        let shape = 2.5;
        let t = IdTriple::new(0.0, 0.0, Some(LevyMeasure::gamma_tail(shape).unwrap()), HKind::Zero).unwrap();
        for h in HKind::ALL {
            let r = rebase_h(&t, h).unwrap();
            for u in [0.1, 1.0, 3.0, 10.0] {
                let v = cf_quadrature(&r, u, 1.0).unwrap();
                let e = Complex::new(1.0, -u).powf(-shape);
                assert!((v - e).norm() <= 1e-8 * e.norm(), "{h:?} {u}: {v} vs {e}");
            }
        }
    }

    #[test]
    fn time_power() {
        let t = stable_triple(&StableParams::s1(1.5, 0.3, 1.0, 0.2).unwrap()).unwrap();
        let one = cf_quadrature(&t, 0.7, 1.0).unwrap();
        let two = cf_quadrature(&t, 0.7, 2.0).unwrap();
        assert_abs_diff_eq!((one * one - two).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn stable_bridge_matches_closed_form() {
        let p = StableParams::s1(1.5, 0.3, 1.0, 0.2).unwrap();
        let t = stable_triple(&p).unwrap();
        let q = cf_quadrature(&t, 0.7, 1.0).unwrap();
        let c = cf(&p, 0.7);
        assert!((q - c).norm() <= 1e-6 * c.norm(), "{q} vs {c}");
    }

    #[test]
    fn exp_moment_gamma() {
        let t = IdTriple::new(0.0, 0.0, Some(LevyMeasure::gamma_tail(2.5).unwrap()), HKind::Zero).unwrap();
        assert_eq!(exp_moment(&t, 0.0).unwrap(), 1.0);
        assert_relative_eq!(exp_moment(&t, 0.5).unwrap(), 0.5f64.powf(-2.5), max_relative = 1e-13);
        assert_eq!(exp_moment(&t, 1.0).unwrap(), f64::INFINITY);
        let r = rebase_h(&t, HKind::Rational).unwrap();
        assert_relative_eq!(exp_moment(&r, 0.3).unwrap(), 0.7f64.powf(-2.5), max_relative = 1e-12);
    }

    #[test]
    fn exp_moment_stable() {
        let m = stable_levy(0.5, 1.0, 0.0).unwrap();
        let t = IdTriple::new(0.0, 0.0, Some(m), HKind::Zero).unwrap();
        assert_eq!(exp_moment(&t, 0.2).unwrap(), f64::INFINITY);
        // E e^{-sX} for the positive half-stable law: exp(Γ(-1/2)√s) = exp(-2√(πs)).
        let v = exp_moment(&t, -0.8).unwrap();
        assert_relative_eq!(v, (-2.0 * (PI * 0.8).sqrt()).exp(), max_relative = 1e-9);
    }

    #[test]
    fn id_sum_rules() {
        let p1 = IdTriple::new(0.0, 0.0, Some(LevyMeasure::point_mass(1.0, 1.0).unwrap()), HKind::Zero).unwrap();
        let p2 = IdTriple::new(0.0, 0.0, Some(LevyMeasure::point_mass(2.0, 1.0).unwrap()), HKind::Zero).unwrap();
        let s = id_sum(&p1, &p2).unwrap();
        let e = ((Complex::new(0.0, 0.9f64).exp() - 1.0) * 3.0).exp();
        assert_abs_diff_eq!((cf_quadrature(&s, 0.9, 1.0).unwrap() - e).norm(), 0.0, epsilon = 1e-14);
        let empty = IdTriple::new(0.0, 0.0, None, HKind::Zero).unwrap();
        let same = id_sum(&p1, &empty).unwrap();
        assert_eq!((same.a, same.b, same.levy.len()), (0.0, 0.0, 1));
        let other = IdTriple::new(0.0, 0.0, None, HKind::Sin).unwrap();
        assert!(matches!(id_sum(&p1, &other), Err(Error::HMismatch)));
    }

    #[test]
    fn invalid_h_rejected() {
        let m = stable_levy(1.5, 1.0, 0.0).unwrap();
        assert!(matches!(IdTriple::new(0.0, 0.0, Some(m.clone()), HKind::Zero), Err(Error::InvalidH)));
        let t = IdTriple::new(0.0, 0.0, Some(m), HKind::Sin).unwrap();
        assert!(matches!(rebase_h(&t, HKind::Zero), Err(Error::InvalidH)));
        assert!(rebase_h(&t, HKind::Id).is_ok());
    }

    #[test]
    fn tail_masses() {
        let m = stable_levy(1.0, 1.0, 0.0).unwrap();
        assert_eq!(tail_mass(&m, 2.0).unwrap(), (0.5, 0.0));
        let g = LevyMeasure::generic(|x: f64| if x > 0.0 { x.powf(-2.0) } else { 0.0 }, false, false);
        let (up, lo) = tail_mass(&g, 2.0).unwrap();
        assert_abs_diff_eq!(up, 0.5, epsilon = 1e-12);
        assert_eq!(lo, 0.0);
    }

    #[test]
    fn bridge_constants() {
        let p = stable_params_from_measures(&stable_levy(1.0, 1.0, 0.0).unwrap()).unwrap();
        assert_abs_diff_eq!(p.gamma, PI / 2.0, epsilon = 1e-15);
        assert_eq!(p.beta, 1.0);
        let p = stable_params_from_measures(&stable_levy(1.3, 0.7, 0.7).unwrap()).unwrap();
        assert_eq!(p.beta, 0.0);
        let p = stable_params_from_measures(&stable_levy(0.5f64, 1.0, 0.0).unwrap()).unwrap();
        assert_relative_eq!(p.gamma.sqrt(), (2.0 * PI).sqrt(), max_relative = 1e-13);
    }

    #[test]
    fn generic_density_matches_stable_pair() {
        let (a, cp, cm) = (1.2, 0.8, 0.3);
        let g = LevyMeasure::generic(
            move |x: f64| if x > 0.0 { cp * x.powf(-a - 1.0) } else { cm * (-x).powf(-a - 1.0) },
            false,
            true,
        );
        let tg = IdTriple::new(0.0, 0.1, Some(g), HKind::Sin).unwrap();
        let ts = IdTriple::new(0.0, 0.1, Some(stable_levy(a, cp, cm).unwrap()), HKind::Sin).unwrap();
        for h in [HKind::Rational, HKind::Id, HKind::TruncId] {
            let bg = rebase_h(&tg, h).unwrap().b;
            let bs = rebase_h(&ts, h).unwrap().b;
            assert_abs_diff_eq!(bg, bs, epsilon = 1e-8);
        }
        let v1 = cf_quadrature(&tg, 1.7, 1.0).unwrap();
        let v2 = cf_quadrature(&ts, 1.7, 1.0).unwrap();
        assert_abs_diff_eq!((v1 - v2).norm(), 0.0, epsilon = 1e-9);
    }
}
