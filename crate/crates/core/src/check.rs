//! Acceptance checks, shared by the `stable check` command and the test suite.
//!
//! Each criterion returns an outcome with its worst observed deviation and
//! wall time; a criterion passes only if both are within bounds.

use std::f64::consts::PI;
use std::fmt;
use std::time::Instant;

use num_complex::Complex;
use serde::Serialize;

use crate::density::{p_at_zero, p_feller, p_feller_inversion, pdf_at_zero_beta1, Method};
use crate::doa::{
    centering_bn, cf_expansion_fit, density_at_zero_limit, example_catalog, limit_laplace_beta1, limit_params,
    model_cf, mult_transform_alpha1, ExampleName, TailSpec,
};
use crate::error::Result;
use crate::infdiv::{cf_quadrature, exp_moment, rebase_h, stable_levy, stable_triple, HKind, IdTriple, LevyMeasure};
use crate::montecarlo::{empirical_cf, poisson_integral_samples, simulate_sums, symmetric_grid, SimConfig, Stream, Variates};
use crate::params::{cf, convert, laplace, Convention, StableParams};
use crate::real::EULER_GAMMA;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Oracle,
    Roundtrip,
    Montecarlo,
    All,
}

impl Suite {
    pub fn criteria(self) -> &'static [u8] {
        match self {
            Suite::Oracle => &[1, 3, 4, 5, 7, 8],
            Suite::Roundtrip => &[2],
            Suite::Montecarlo => &[6],
            Suite::All => &[1, 2, 3, 4, 5, 6, 7, 8],
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "oracle" => Ok(Suite::Oracle),
            "roundtrip" => Ok(Suite::Roundtrip),
            "montecarlo" => Ok(Suite::Montecarlo),
            "all" => Ok(Suite::All),
            _ => Err(format!("unknown suite '{s}' (oracle, roundtrip, montecarlo, all)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
    pub time_limit: Option<f64>,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        let limit = self.time_limit.map_or(String::new(), |l| format!(" / {l:.0} s"));
        write!(f, "criterion {} {verdict} [{}] {} ({:.2} s{limit})", self.id, self.name, self.detail, self.seconds)
    }
}

/// Worst deviation seen and whether every comparison met its bound.
struct Tally {
    worst: f64,
    ok: bool,
    notes: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { worst: 0.0, ok: true, notes: Vec::new() }
    }

    fn check(&mut self, what: &str, dev: f64, bound: f64) {
        self.worst = self.worst.max(dev);
        if !(dev <= bound) {
            self.ok = false;
            if self.notes.len() < 5 {
                self.notes.push(format!("{what}: {dev:.3e} > {bound:.0e}"));
            }
        }
    }

    fn fail(&mut self, what: String) {
        self.ok = false;
        if self.notes.len() < 5 {
            self.notes.push(what);
        }
    }

    fn detail(&self, label: &str) -> String {
        let mut s = format!("{label} {:.3e}", self.worst);
        if !self.notes.is_empty() {
            s.push_str("; ");
            s.push_str(&self.notes.join("; "));
        }
        s
    }
}

fn timed(id: u8, name: &'static str, time_limit: Option<f64>, body: impl FnOnce() -> (bool, String)) -> Outcome {
    let start = Instant::now();
    let (ok, detail) = body();
    let seconds = start.elapsed().as_secs_f64();
    let passed = ok && time_limit.is_none_or(|l| seconds <= l);
    Outcome { id, name, passed, detail, seconds, time_limit }
}

pub const ORACLE_ALPHAS: [f64; 6] = [0.5, 0.8, 1.0, 1.2, 1.5, 1.9];
pub const ORACLE_BETAS: [f64; 4] = [-1.0, 0.0, 0.3, 1.0];

pub fn criterion_1() -> Outcome {
    timed(1, "closed-form CF vs Levy quadrature", Some(30.0), || {
        let mut tally = Tally::new();
        for &a in &ORACLE_ALPHAS {
            for &b in &ORACLE_BETAS {
                let p = StableParams::s1(a, b, 1.3, 0.4).expect("grid point");
                let triple = match stable_triple(&p) {
                    Ok(t) => t,
                    Err(e) => {
                        tally.fail(format!("alpha={a} beta={b}: {e}"));
                        continue;
                    }
                };
                for &t in &[0.1, 0.7, 2.0, 5.0] {
                    for u in [t, -t] {
                        match cf_quadrature(&triple, u, 1.0) {
                            Ok(q) => {
                                let c = cf(&p, u);
                                tally.check(&format!("alpha={a} beta={b} t={u}"), (q - c).norm() / c.norm(), 1e-6);
                            }
                            Err(e) => tally.fail(format!("alpha={a} beta={b} t={u}: {e}")),
                        }
                    }
                }
            }
        }
        (tally.ok, tally.detail("max relative deviation"))
    })
}

/// Largest field deviation, absolute for |v| ≤ 1 and relative above, plus the raw absolute one.
fn field_error(x: &StableParams<f64>, y: &StableParams<f64>) -> (f64, f64) {
    [(x.alpha, y.alpha), (x.beta, y.beta), (x.gamma, y.gamma), (x.delta, y.delta)]
        .iter()
        .fold((0.0, 0.0), |(m, a), &(u, v)| {
            let d = (u - v).abs();
            (f64::max(m, d / v.abs().max(1.0)), f64::max(a, d))
        })
}

#[derive(Default)]
struct Absolute {
    worst: f64,
    over: usize,
    total: usize,
}

fn roundtrip_point(p: &StableParams<f64>, convs: &[Convention], tally: &mut Tally, abs: &mut Absolute) {
    for &from in convs {
        let Ok(start) = convert(p, from) else {
            tally.fail(format!("{p:?} -> {from}"));
            continue;
        };
        for &to in convs {
            let back = convert(&start, to).and_then(|q| convert(&q, from));
            match back {
                Ok(q) => {
                    let (mixed, raw) = field_error(&q, &start);
                    tally.check(&format!("{from}->{to}->{from} at {p:?}"), mixed, 1e-12);
                    abs.worst = abs.worst.max(raw);
                    abs.over += usize::from(raw > 1e-12);
                    abs.total += 1;
                }
                Err(e) => tally.fail(format!("{from}->{to} at {p:?}: {e}")),
            }
        }
    }
}

const GENERAL: [Convention; 6] =
    [Convention::S1, Convention::S0, Convention::Mu1, Convention::ZolA, Convention::ZolM, Convention::ZolB];

/// Random S1 points: α uniform on [0.1, 2) with |α − 1| ≥ 1e-6, β ∈ [−1, 1],
/// γ ∈ [0.1, 5], δ ∈ [−5, 5].
pub fn roundtrip_points(count: usize, seed: u64, alpha_one: bool) -> Vec<StableParams<f64>> {
    let mut s = Stream::new(seed, 0);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let alpha = if alpha_one { 1.0 } else { 0.1 + 1.9 * s.uniform() };
        if !alpha_one && (alpha - 1.0).abs() < 1e-6 {
            continue;
        }
        let beta = 2.0 * s.uniform() - 1.0;
        let gamma = 0.1 + 4.9 * s.uniform();
        let delta = 10.0 * s.uniform() - 5.0;
        out.push(StableParams::s1(alpha, beta, gamma, delta).expect("valid draw"));
    }
    out
}

pub fn criterion_2() -> Outcome {
    timed(2, "parametrization round trips", Some(5.0), || {
        let mut tally = Tally::new();
        let mut abs = Absolute::default();
        let strict: Vec<Convention> = GENERAL
            .iter()
            .copied()
            .chain([Convention::ZolCStrict, Convention::FellerStrict, Convention::StrictKl])
            .collect();
        for p in roundtrip_points(1000, 0x5eed_0001, false) {
            roundtrip_point(&p, &GENERAL, &mut tally, &mut abs);
            let strict_p = StableParams::s1(p.alpha, p.beta, p.gamma, 0.0).expect("valid");
            roundtrip_point(&strict_p, &strict, &mut tally, &mut abs);
        }
        let general_one: Vec<Convention> = GENERAL.iter().copied().chain([Convention::OneStableKlb]).collect();
        for p in roundtrip_points(200, 0x5eed_0002, true) {
            roundtrip_point(&p, &general_one, &mut tally, &mut abs);
            let strict_p = StableParams::s1(1.0, 0.0, p.gamma, p.delta).expect("valid");
            let all: Vec<Convention> = general_one.iter().copied().chain(strict[6..].iter().copied()).collect();
            roundtrip_point(&strict_p, &all, &mut tally, &mut abs);
        }
        let detail = format!(
            "{}; raw absolute max {:.3e}, {} of {} round trips above 1e-12 absolute",
            tally.detail("max field error (relative above 1)"),
            abs.worst,
            abs.over,
            abs.total
        );
        (tally.ok, detail)
    })
}

/// (α, γ̃, x) points evaluated by the two series.
pub fn density_grid() -> Vec<(f64, f64, f64)> {
    let mut g = Vec::new();
    for &(a, xs) in &[(0.3, [0.05, 0.5, 2.0, 10.0, 50.0]), (0.5, [0.2, 1.0, 3.0, 10.0, 40.0]), (0.8, [2.0, 4.0, 8.0, 20.0, 60.0])] {
        for &frac in &[-1.0, 0.0, 0.6] {
            for &x in xs.iter().step_by(if frac == 0.0 { 1 } else { 2 }) {
                g.push((a, frac * a, x));
            }
        }
    }
    for &(a, xs) in &[(1.2, [0.05, 0.3, 0.8, 1.2, 1.8]), (1.5, [0.05, 0.4, 1.0, 2.0, 3.0]), (1.8, [0.1, 0.5, 1.0, 2.0, 4.0])] {
        for &frac in &[-1.0, 0.0, 0.6] {
            for &x in xs.iter().step_by(if frac == 0.0 { 1 } else { 2 }) {
                g.push((a, frac * (2.0 - a), x));
            }
        }
    }
    g.truncate(50);
    g
}

pub fn criterion_3() -> Outcome {
    timed(3, "density series vs inversion", Some(60.0), || {
        let mut tally = Tally::new();
        let grid = density_grid();
        let mut series_small = 0;
        let mut series_large = 0;
        for &(a, tg, x) in &grid {
            let (s, i) = match (p_feller(x, a, tg), p_feller_inversion(x, a, tg)) {
                (Ok(s), Ok(i)) => (s, i),
                (s, i) => {
                    tally.fail(format!("alpha={a} tg={tg} x={x}: {:?} / {:?}", s.err(), i.err()));
                    continue;
                }
            };
            match s.method {
                Method::SeriesSmallAlpha => series_small += 1,
                Method::SeriesLargeAlpha => series_large += 1,
                m => tally.fail(format!("alpha={a} tg={tg} x={x} evaluated by {m:?}")),
            }
            tally.check(&format!("alpha={a} tg={tg} x={x}"), (s.value - i.value).abs(), 1e-6);
        }
        let mut zero = Tally::new();
        for &a in &[1.1_f64, 1.3, 1.5, 1.7, 1.9] {
            for &frac in &[-1.0, -0.3, 0.0, 0.5, 1.0] {
                let tg = frac * (2.0 - a);
                match (p_at_zero(a, tg), p_feller(1e-6, a, tg)) {
                    (Ok(z), Ok(s)) => zero.check(&format!("p(0) alpha={a} tg={tg}"), (z - s.value).abs(), 1e-6),
                    _ => zero.fail(format!("p(0) alpha={a} tg={tg} failed")),
                }
            }
        }
        let ok = tally.ok && zero.ok && grid.len() == 50;
        let detail = format!(
            "{} points ({series_small} small-alpha, {series_large} large-alpha series), {}; {}",
            grid.len(),
            tally.detail("max |series - inversion|"),
            zero.detail("max |p(0) - p(1e-6)|")
        );
        (ok, detail)
    })
}

pub fn criterion_4() -> Outcome {
    timed(4, "closed-form limit constants", None, || {
        let mut tally = Tally::new();
        let run = |tally: &mut Tally| -> Result<()> {
            let (p, _) = limit_params(&TailSpec::new(1.0, 1.0, 1.0)?)?;
            tally.check("gamma at alpha=1, C=1", (p.gamma - PI / 2.0).abs(), 1e-15);
            let half = TailSpec::new(0.5, 1.0, 1.0)?;
            let (ph, _) = limit_params(&half)?;
            for k in 0..=20 {
                let t = 0.25 * k as f64;
                let want = (-PI.sqrt() * t.sqrt()).exp();
                tally.check(&format!("Laplace t={t}"), (limit_laplace_beta1(&half, t)? - want).abs(), 1e-12);
                tally.check(&format!("Laplace via law t={t}"), (laplace(&ph, Complex::new(t, 0.0))?.re - want).abs(), 1e-12);
            }
            for &(a, c) in &[(1.2_f64, 1.0_f64), (1.5, 1.0), (1.5, 8.0), (1.8, 0.3)] {
                let spec = TailSpec::new(a, c, 1.0)?;
                let direct = density_at_zero_limit(&spec)?;
                let (law, _) = limit_params(&spec)?;
                let via = pdf_at_zero_beta1(law.gamma, a)?;
                tally.check(&format!("f(0) alpha={a} C={c}"), (direct - via).abs() / via, 1e-10);
            }
            let base = example_catalog::<f64>(ExampleName::OneOverExp)?;
            let ln2 = 2f64.ln();
            let (vw, _) = mult_transform_alpha1(&base.limit, 1.0 / 12.0, -(3.0 * ln2 + 1.0) / 18.0)?;
            let want = StableParams::s1(1.0, 1.0, PI / 24.0, (5.0 - 6.0 * EULER_GAMMA + 6.0 * ln2) / 36.0)?;
            let catalog = example_catalog(ExampleName::VsqOverW { q: 0.5 })?.limit;
            for (label, got) in [("V^2/W transform", vw), ("V^2/W catalog", catalog)] {
                let dev = [(got.gamma, want.gamma), (got.beta, want.beta), (got.delta, want.delta)]
                    .iter()
                    .map(|(u, v)| (u - v).abs())
                    .fold(0.0, f64::max);
                tally.check(label, dev, 1e-12);
            }
            Ok(())
        };
        if let Err(e) = run(&mut tally) {
            tally.fail(e.to_string());
        }
        (tally.ok, tally.detail("max deviation"))
    })
}

pub fn criterion_5() -> Outcome {
    timed(5, "centering sequence for X = 1/U", Some(10.0), || {
        let mut tally = Tally::new();
        let model = example_catalog::<f64>(ExampleName::OneOverU).expect("catalog");
        let mut ratio: f64 = 0.0;
        for k in 3..=6 {
            let n = 10f64.powi(k);
            match centering_bn(&model, n) {
                Ok(b) => {
                    let dev = (b - (n.ln() + 1.0 - EULER_GAMMA)).abs();
                    ratio = ratio.max(dev * n / 3.0);
                    tally.check(&format!("n=1e{k}"), dev, 3.0 / n);
                }
                Err(e) => tally.fail(format!("n=1e{k}: {e}")),
            }
        }
        (tally.ok, format!("{}, worst |dev|/(3/n) {ratio:.2e}", tally.detail("max |b_n - (log n + 1 - gamma_E)|")))
    })
}

pub const MC_SEED: u64 = 20_240_601;

pub fn criterion_6() -> Outcome {
    timed(6, "Monte Carlo convergence of normalized sums", Some(300.0), || {
        let mut tally = Tally::new();
        let mut parts = Vec::new();
        for name in [ExampleName::OneOverU, ExampleName::Pareto { alpha: 0.5, c: 1.0 }, ExampleName::ExpRatio] {
            let report = example_catalog::<f64>(name)
                .and_then(|m| SimConfig::new(10_000, 100_000, MC_SEED, symmetric_grid(5.0, 41)).and_then(|c| simulate_sums(&m, &c)));
            match report {
                Ok(r) => {
                    tally.check(&format!("{name} ecf"), r.ecf_distance, 0.02);
                    tally.check(&format!("{name} ks"), r.ks_distance, 0.02);
                    parts.push(format!("{name}: ecf {:.4} ks {:.4}", r.ecf_distance, r.ks_distance));
                }
                Err(e) => tally.fail(format!("{name}: {e}")),
            }
        }
        (tally.ok, format!("{}; {}", parts.join(", "), tally.detail("max distance")))
    })
}

pub fn criterion_7() -> Outcome {
    timed(7, "CF expansion recovery", None, || {
        let mut tally = Tally::new();
        for &(a, kappa, lambda) in &[(0.4, 1.0, 0.5), (0.7, 2.0, -1.5), (1.0, 1.3, 0.0), (1.3, 0.9, 0.4), (1.7, 1.5, -0.2), (2.0, 0.5, 0.0)] {
            let phi = |t: f64| (-Complex::new(kappa, -lambda) * t.powf(a)).exp();
            match cf_expansion_fit(phi, a, false) {
                Ok(f) => tally.check(
                    &format!("stable alpha={a}"),
                    (f.kappa - kappa).abs().max((f.lambda - lambda).abs()),
                    1e-6,
                ),
                Err(e) => tally.fail(format!("stable alpha={a}: {e}")),
            }
        }
        let mut u = Tally::new();
        let fit = example_catalog::<f64>(ExampleName::OneOverU)
            .and_then(|m| cf_expansion_fit(|t| model_cf(&m, t).unwrap_or(Complex::new(f64::NAN, 0.0)), 1.0, true));
        let mut extra = String::new();
        match fit {
            Ok(f) => {
                let b = f.b.unwrap_or(f64::NAN);
                u.check("1/U b", (b - 1.0).abs(), 1e-2);
                u.check("1/U kappa", (f.kappa - PI / 2.0).abs(), 1e-2);
                extra = format!("1/U: b {b:.6}, kappa {:.6}", f.kappa);
            }
            Err(e) => u.fail(format!("1/U: {e}")),
        }
        (tally.ok && u.ok, format!("{}; {extra}, {}", tally.detail("stable max error"), u.detail("max error")))
    })
}

pub fn criterion_8() -> Outcome {
    timed(8, "infinitely divisible layer", None, || {
        let mut tally = Tally::new();
        let run = |tally: &mut Tally| -> Result<()> {
            let gamma = IdTriple::new(0.0, 0.0, Some(LevyMeasure::gamma_tail(2.5)?), HKind::Zero)?;
            for &t in &[-5.0, -1.0, 0.1, 0.5, 1.0, 3.0, 10.0] {
                let want = Complex::new(1.0, -t).powf(-2.5);
                tally.check(&format!("Gamma CF t={t}"), (cf_quadrature(&gamma, t, 1.0)? - want).norm(), 1e-8);
            }
            for k in 1..=9 {
                let s = 0.1 * k as f64;
                let want = (1.0 - s).powf(-2.5);
                tally.check(&format!("E e^(sX) s={s}"), (exp_moment(&gamma, s)? - want).abs() / want, 1e-8);
            }
            let at_one = exp_moment(&gamma, 1.0)?;
            if at_one != f64::INFINITY {
                tally.fail(format!("E e^X = {at_one}, expected +inf"));
            }
            let mut triples = vec![gamma.clone()];
            for &(a, b) in &[(0.5, 0.7), (1.0, -0.4), (1.5, 1.0)] {
                triples.push(stable_triple(&StableParams::s1(a, b, 1.2, 0.3)?)?);
            }
            for base in &triples {
                for h in HKind::ALL {
                    let Ok(there) = rebase_h(base, h) else { continue };
                    let back = rebase_h(&there, base.h)?;
                    tally.check(&format!("rebase via {h:?}"), (back.b - base.b).abs(), 1e-10);
                }
            }
            let levy = stable_levy(0.5, 1.0, 0.0)?;
            let xs = poisson_integral_samples(&levy, false, 100_000, MC_SEED)?;
            let triple = IdTriple::new(0.0, 0.0, Some(levy), HKind::Zero)?;
            for &t in &[-3.0, 0.1, 0.5, 1.0, 2.0, 5.0] {
                let want = cf_quadrature(&triple, t, 1.0)?;
                tally.check(&format!("Poisson ECF t={t}"), (empirical_cf(&xs, t) - want).norm(), 0.02);
            }
            Ok(())
        };
        if let Err(e) = run(&mut tally) {
            tally.fail(e.to_string());
        }
        (tally.ok, tally.detail("max deviation (Poisson ECF bound 0.02, others <= 1e-8)"))
    })
}

pub fn criterion(id: u8) -> Option<Outcome> {
    Some(match id {
        1 => criterion_1(),
        2 => criterion_2(),
        3 => criterion_3(),
        4 => criterion_4(),
        5 => criterion_5(),
        6 => criterion_6(),
        7 => criterion_7(),
        8 => criterion_8(),
        _ => return None,
    })
}

pub fn run_suite(suite: Suite) -> Vec<Outcome> {
    suite.criteria().iter().filter_map(|&id| criterion(id)).collect()
}
