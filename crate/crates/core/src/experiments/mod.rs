//! Seeded Monte Carlo experiments on binomial random subsets `[n]_p`.
//!
//! Trial `i` of an experiment with seed `s` draws from ChaCha8 seeded with `s`
//! on stream `i`, so every trial can be reproduced on its own and results do
//! not depend on how trials are spread over threads.

mod deciders;
mod moments;

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use deciders::{arrow_epsilon, arrow_s, is_valid_colouring, Verdict};
pub use moments::{
    expected_count_exact, variance_exact, MomentReport, SupportTable, DEFAULT_SUPPORT_CAP,
};

use crate::classify::{max_density, max_one_density};
use crate::error::{Error, Result};
use crate::extremal::{Budget, Decision};
use crate::solutions::{contains_solution, GroundSet, SolutionClass};
use crate::system::LinearSystem;

/// `[n]_p` for trial `trial` of an experiment seeded with `seed`.
pub fn sample_set(n: usize, p: f64, seed: u64, trial: u64) -> GroundSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let elements = (1..=n as i64).filter(|_| rng.gen::<f64>() < p).collect();
    GroundSet::new(elements).expect("increasing positive elements")
}

/// What is decided on each sampled set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Property {
    /// The set contains a solution of the class.
    Contains,
    /// `T ->_eps A`.
    ArrowEpsilon(BigRational),
    /// `T ->_s A`.
    ArrowS(usize),
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Property::Contains => f.write_str("contains"),
            Property::ArrowEpsilon(eps) => write!(f, "arrow_epsilon:{}", format_rational(eps)),
            Property::ArrowS(s) => write!(f, "arrow_s:{s}"),
        }
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (head, arg) = s.split_once(':').map_or((s, None), |(h, a)| (h, Some(a)));
        match (head, arg) {
            ("contains", None) => Ok(Property::Contains),
            ("arrow_epsilon" | "epsilon", Some(a)) => Ok(Property::ArrowEpsilon(parse_rational(a)?)),
            ("arrow_s" | "s", Some(a)) => a
                .parse()
                .map(Property::ArrowS)
                .map_err(|_| Error::InvalidArgument(format!("bad colour count {a:?}"))),
            _ => Err(Error::InvalidArgument(format!(
                "unknown property {s:?}; expected contains, arrow_epsilon:<eps> or arrow_s:<s>"
            ))),
        }
    }
}

/// Parses `a/b`, an integer, or a finite decimal such as `0.25`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidArgument(format!("not a rational number: {s:?}"));
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num = num.trim().parse().map_err(|_| bad())?;
        let den: num_bigint::BigInt = den.trim().parse().map_err(|_| bad())?;
        if den == 0.into() {
            return Err(bad());
        }
        return Ok(BigRational::new(num, den));
    }
    let (sign, body) = s.strip_prefix('-').map_or((1, s), |rest| (-1, rest));
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() || !(int.chars().chain(frac.chars())).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: num_bigint::BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let den = num_bigint::BigInt::from(10).pow(frac.len() as u32);
    Ok(BigRational::new(digits * sign, den))
}

/// `num/den`, or just `num` for integers.
pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialConfig {
    pub n: usize,
    pub p: f64,
    pub trials: u64,
    pub seed: u64,
    pub class: SolutionClass,
    pub property: Property,
    pub budget: Budget,
}

impl TrialConfig {
    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::InvalidArgument(format!("p = {} is not a probability", self.p)));
        }
        match &self.property {
            Property::ArrowEpsilon(eps) if !eps.is_positive() || *eps > BigRational::one() => {
                Err(Error::InvalidArgument("epsilon must lie in (0, 1]".into()))
            }
            Property::ArrowS(0) => Err(Error::InvalidArgument("s must be at least 1".into())),
            _ => Ok(()),
        }
    }
}

/// Decides the property on trial `trial`'s sample.
pub fn run_trial(a: &LinearSystem, config: &TrialConfig, trial: u64) -> Result<Decision> {
    let t = sample_set(config.n, config.p, config.seed, trial);
    decide(a, &t, config)
}

fn decide(a: &LinearSystem, t: &GroundSet, config: &TrialConfig) -> Result<Decision> {
    Ok(match &config.property {
        Property::Contains => Decision::from_bool(contains_solution(a, t, config.class)?),
        Property::ArrowEpsilon(eps) => arrow_epsilon(a, t, eps, config.class, config.budget)?.decision,
        Property::ArrowS(s) => arrow_s(a, t, *s, config.class, config.budget)?.decision,
    })
}

/// One point of a threshold curve. `estimate` and the interval are over the
/// determinate trials only.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveRow {
    pub n: usize,
    pub c: Option<BigRational>,
    pub p: f64,
    pub trials: u64,
    pub successes: u64,
    pub indeterminate: u64,
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

const Z_95: f64 = 1.959963984540054;

/// Wilson score interval at 95%.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let phat = successes as f64 / n;
    let z2 = Z_95 * Z_95;
    let centre = (phat + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = Z_95 * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / (1.0 + z2 / n);
    let low = if successes == 0 { 0.0 } else { (centre - half).max(0.0) };
    let high = if successes == trials { 1.0 } else { (centre + half).min(1.0) };
    (low, high)
}

pub fn estimate_probability(a: &LinearSystem, config: &TrialConfig) -> Result<CurveRow> {
    config.validate()?;
    let outcomes: Vec<Decision> = (0..config.trials)
        .into_par_iter()
        .map(|i| run_trial(a, config, i))
        .collect::<Result<_>>()?;
    let successes = outcomes.iter().filter(|&&d| d == Decision::True).count() as u64;
    let indeterminate = outcomes.iter().filter(|&&d| d == Decision::Indeterminate).count() as u64;
    let decided = config.trials - indeterminate;
    let (ci_low, ci_high) = wilson_interval(successes, decided);
    let estimate = if decided == 0 { 0.0 } else { successes as f64 / decided as f64 };
    Ok(CurveRow {
        n: config.n,
        c: None,
        p: config.p,
        trials: config.trials,
        successes,
        indeterminate,
        estimate,
        ci_low,
        ci_high,
    })
}

/// Which maximum density sets the exponent in `p = C n^{-1/exponent}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExponentSource {
    M1,
    M,
}

impl fmt::Display for ExponentSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExponentSource::M1 => "m1",
            ExponentSource::M => "m",
        })
    }
}

impl FromStr for ExponentSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "m1" => Ok(ExponentSource::M1),
            "m" => Ok(ExponentSource::M),
            _ => Err(Error::InvalidArgument(format!("exponent must be m1 or m, got {s:?}"))),
        }
    }
}

impl ExponentSource {
    pub fn value(self, a: &LinearSystem) -> Result<BigRational> {
        Ok(match self {
            ExponentSource::M1 => max_one_density(a)?.value,
            ExponentSource::M => max_density(a)?.value,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub ns: Vec<usize>,
    pub cs: Vec<BigRational>,
    pub exponent: ExponentSource,
    pub property: Property,
    pub class: SolutionClass,
    pub trials: u64,
    pub seed: u64,
    pub budget: Budget,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdCurve {
    pub exponent_source: ExponentSource,
    pub exponent: BigRational,
    /// `((1 - eps) / 4)^{1/(m-1)}` for `->_eps` sweeps.
    pub reference_c: Option<f64>,
    pub rows: Vec<CurveRow>,
}

/// `((1 - eps) / 4)^{1/(m - 1)}`.
pub fn reference_small_c(eps: f64, m: usize) -> f64 {
    ((1.0 - eps) / 4.0).powf(1.0 / (m as f64 - 1.0))
}

/// `C n^{-1/exponent}`, capped at 1.
pub fn threshold_probability(c: &BigRational, n: usize, exponent: &BigRational) -> f64 {
    let c = c.to_f64().unwrap_or(f64::INFINITY);
    let e = exponent.to_f64().expect("finite exponent");
    (c * (n as f64).powf(-1.0 / e)).clamp(0.0, 1.0)
}

/// Every `(n, C)` pair is run with the same seed.
pub fn threshold_sweep(a: &LinearSystem, config: &SweepConfig) -> Result<ThresholdCurve> {
    let exponent = config.exponent.value(a)?;
    let reference_c = match &config.property {
        Property::ArrowEpsilon(eps) if a.cols() > 1 => {
            Some(reference_small_c(eps.to_f64().expect("finite"), a.cols()))
        }
        _ => None,
    };
    let mut rows = Vec::with_capacity(config.ns.len() * config.cs.len());
    for &n in &config.ns {
        for c in &config.cs {
            if c.is_negative() {
                return Err(Error::InvalidArgument("C must be nonnegative".into()));
            }
            let trial = TrialConfig {
                n,
                p: threshold_probability(c, n, &exponent),
                trials: config.trials,
                seed: config.seed,
                class: config.class,
                property: config.property.clone(),
                budget: config.budget,
            };
            let mut row = estimate_probability(a, &trial)?;
            row.c = Some(c.clone());
            rows.push(row);
        }
    }
    Ok(ThresholdCurve { exponent_source: config.exponent, exponent, reference_c, rows })
}

pub const CSV_HEADER: [&str; 14] = [
    "system", "name", "property", "class", "n", "C", "p", "trials", "successes", "indeterminate",
    "estimate", "ci_low", "ci_high", "seed",
];

/// Writes rows with the columns of [`CSV_HEADER`].
pub fn write_csv<W: Write>(
    out: W,
    a: &LinearSystem,
    property: &Property,
    class: SolutionClass,
    seed: u64,
    rows: &[CurveRow],
) -> Result<()> {
    let io = |e: csv::Error| Error::InvalidArgument(format!("csv output failed: {e}"));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in rows {
        w.write_record([
            a.matrix().to_string(),
            a.name().unwrap_or("").to_string(),
            property.to_string(),
            class.to_string(),
            r.n.to_string(),
            r.c.as_ref().map(format_rational).unwrap_or_default(),
            r.p.to_string(),
            r.trials.to_string(),
            r.successes.to_string(),
            r.indeterminate.to_string(),
            r.estimate.to_string(),
            r.ci_low.to_string(),
            r.ci_high.to_string(),
            seed.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::InvalidArgument(format!("csv output failed: {e}")))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn schur() -> LinearSystem {
        LinearSystem::from_i64(&[&[1, 1, -1]]).unwrap().with_name("schur")
    }

    fn config(n: usize, p: f64, property: Property) -> TrialConfig {
        TrialConfig {
            n,
            p,
            trials: 50,
            seed: 7,
            class: SolutionClass::Proper,
            property,
            budget: Budget::unlimited(),
        }
    }

    #[test]
    fn sampling_extremes_and_reproducibility() {
        assert!(sample_set(20, 0.0, 1, 0).is_empty());
        assert_eq!(sample_set(20, 1.0, 1, 0), GroundSet::range(20));
        assert_eq!(sample_set(100, 0.3, 5, 9), sample_set(100, 0.3, 5, 9));
        assert_ne!(sample_set(100, 0.3, 5, 9), sample_set(100, 0.3, 5, 10));
    }

    #[test]
    fn probability_extremes() {
        let r = estimate_probability(&schur(), &config(10, 0.0, Property::Contains)).unwrap();
        assert_eq!(r.estimate, 0.0);
        let r = estimate_probability(&schur(), &config(10, 1.0, Property::Contains)).unwrap();
        assert_eq!((r.estimate, r.successes), (1.0, 50));
        assert!(r.ci_low <= r.estimate && r.estimate <= r.ci_high);
    }

    #[test]
    fn wilson_examples() {
        let (lo, hi) = wilson_interval(0, 10);
        assert_eq!(lo, 0.0);
        assert!((hi - 0.2775).abs() < 1e-3);
        let (lo, hi) = wilson_interval(5, 10);
        assert!((lo - 0.2366).abs() < 1e-3 && (hi - 0.7634).abs() < 1e-3);
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("0.1").unwrap(), BigRational::new(1.into(), 10.into()));
        assert_eq!(parse_rational("3/6").unwrap(), BigRational::new(1.into(), 2.into()));
        assert_eq!(parse_rational("-2").unwrap(), BigRational::from_integer((-2).into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert_eq!(format_rational(&BigRational::new(1.into(), 10.into())), "1/10");
    }

    #[test]
    fn properties_round_trip() {
        for s in ["contains", "arrow_epsilon:1/2", "arrow_s:2"] {
            assert_eq!(s.parse::<Property>().unwrap().to_string(), s);
        }
        assert!("arrow_s".parse::<Property>().is_err());
    }

    #[test]
    fn reference_constant() {
        assert!((reference_small_c(0.5, 3) - 1.0 / 8f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn sweep_shape_and_csv() {
        let cfg = SweepConfig {
            ns: vec![30],
            cs: vec![BigRational::new(1.into(), 10.into()), BigRational::from_integer(10.into())],
            exponent: ExponentSource::M,
            property: Property::Contains,
            class: SolutionClass::Proper,
            trials: 20,
            seed: 3,
            budget: Budget::unlimited(),
        };
        let curve = threshold_sweep(&schur(), &cfg).unwrap();
        assert_eq!(curve.rows.len(), 2);
        assert_eq!(curve.exponent, BigRational::new(3.into(), 2.into()));
        assert_eq!(curve, threshold_sweep(&schur(), &cfg).unwrap());
        let empty = threshold_sweep(&schur(), &SweepConfig { cs: vec![], ..cfg.clone() }).unwrap();
        assert!(empty.rows.is_empty());
        let mut buf = Vec::new();
        write_csv(&mut buf, &schur(), &cfg.property, cfg.class, cfg.seed, &curve.rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER.join(","));
        assert!(lines.next().unwrap().starts_with("\"[[1,1,-1]]\",schur,contains,proper,30,1/10,"));
    }
}
