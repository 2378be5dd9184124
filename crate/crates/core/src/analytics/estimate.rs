use crate::error::{Error, Result};
use crate::mechanisms::{CardDistribution, MechanismSpec, Responses, SimmonsParams, WarnerParams};

/// An unbiased estimate of `pi_A`. Small-sample noise can push it outside
/// `[0, 1]`; [`Estimate::value`] is the raw statistic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate(f64);

impl Estimate {
    pub fn value(&self) -> f64 {
        self.0
    }

    /// The estimate truncated to `[0, 1]`. Biased.
    pub fn clamped(&self) -> f64 {
        self.0.clamp(0.0, 1.0)
    }
}

/// `(N_1/N - (1 - p)) / (2p - 1)`.
pub fn warner_estimate(responses: &[bool], params: &WarnerParams) -> Result<Estimate> {
    let mean = binary_mean(responses)?;
    Ok(Estimate(warner_from_mean(mean, params)))
}

/// `(N_1/N - (1 - p) pi_B) / p`.
pub fn simmons_estimate(responses: &[bool], params: &SimmonsParams) -> Result<Estimate> {
    let mean = binary_mean(responses)?;
    Ok(Estimate(simmons_from_mean(mean, params)))
}

/// `(mean(X) - E[Y]) / (L + 1 - 2 E[Y])`. Shared by both card designs; for
/// the deck design pass the deck's realized distribution.
pub fn christofides_estimate(responses: &[u32], dist: &CardDistribution) -> Result<Estimate> {
    if responses.is_empty() {
        return Err(Error::InvalidParameter("no responses".into()));
    }
    let l = dist.card_values() as u32;
    if let Some(bad) = responses.iter().find(|r| !(1..=l).contains(*r)) {
        return Err(Error::InvalidParameter(format!(
            "response {bad} outside 1..={l}"
        )));
    }
    let total: u64 = responses.iter().map(|r| *r as u64).sum();
    let mean = total as f64 / responses.len() as f64;
    Ok(Estimate(christofides_from_mean(mean, dist)))
}

/// Dispatches on the design. Binary designs need binary responses and card
/// designs numeric ones.
pub fn estimate(spec: &MechanismSpec, responses: &Responses) -> Result<Estimate> {
    match (spec, responses) {
        (MechanismSpec::Warner(w), Responses::Binary(r)) => warner_estimate(r, w),
        (MechanismSpec::Simmons(s), Responses::Binary(r)) => simmons_estimate(r, s),
        (
            MechanismSpec::Christofides { distribution }
            | MechanismSpec::ImprovedChristofides { distribution },
            Responses::Numeric(r),
        ) => christofides_estimate(r, distribution),
        (spec, _) => Err(Error::InvalidParameter(format!(
            "response type does not match the {} design",
            spec.kind()
        ))),
    }
}

/// Every estimator is affine in the mean response; this is that map.
pub fn estimate_from_mean(spec: &MechanismSpec, mean: f64) -> f64 {
    match spec {
        MechanismSpec::Warner(w) => warner_from_mean(mean, w),
        MechanismSpec::Simmons(s) => simmons_from_mean(mean, s),
        MechanismSpec::Christofides { distribution }
        | MechanismSpec::ImprovedChristofides { distribution } => {
            christofides_from_mean(mean, distribution)
        }
    }
}

fn binary_mean(responses: &[bool]) -> Result<f64> {
    if responses.is_empty() {
        return Err(Error::InvalidParameter("no responses".into()));
    }
    let yes = responses.iter().filter(|b| **b).count();
    Ok(yes as f64 / responses.len() as f64)
}

fn warner_from_mean(mean: f64, w: &WarnerParams) -> f64 {
    let p = w.p();
    (mean - (1.0 - p)) / (2.0 * p - 1.0)
}

fn simmons_from_mean(mean: f64, s: &SimmonsParams) -> f64 {
    (mean - (1.0 - s.p()) * s.pi_b()) / s.p()
}

fn christofides_from_mean(mean: f64, d: &CardDistribution) -> f64 {
    (mean - d.mean()) / d.denominator()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn warner_examples() {
        let w = WarnerParams::new(0.25).unwrap();
        // N_1/N = 1 - p
        let r = [true, true, true, false];
        assert!(warner_estimate(&r, &w).unwrap().value().abs() < 1e-15);
        // N_1/N = p
        let r = [true, false, false, false];
        let e = warner_estimate(&r, &w).unwrap();
        assert!((e.value() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn warner_estimate_can_leave_unit_interval() {
        let w = WarnerParams::new(0.25).unwrap();
        let e = warner_estimate(&[true, true, true, true], &w).unwrap();
        assert!((e.value() + 0.5).abs() < 1e-15);
        assert_eq!(e.clamped(), 0.0);
    }

    #[test]
    fn simmons_examples() {
        let s = SimmonsParams::new(0.5, 0.5).unwrap();
        // (1 - p) pi_B = 0.25
        let r = [true, false, false, false];
        assert!(simmons_estimate(&r, &s).unwrap().value().abs() < 1e-15);
        // p + (1 - p) pi_B = 0.75
        let r = [true, true, true, false];
        assert!((simmons_estimate(&r, &s).unwrap().value() - 1.0).abs() < 1e-15);
        let r = [true, false];
        assert!((simmons_estimate(&r, &s).unwrap().value() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn christofides_examples() {
        let d = CardDistribution::new(vec![0.2, 0.5, 0.3]).unwrap();
        let e = christofides_estimate(&[2, 2], &d).unwrap();
        assert!((e.value() - 0.5).abs() < 1e-12);
        // mean(X) = E[Y] = 2.1 over ten responses
        let r = [2, 2, 2, 2, 2, 2, 2, 2, 2, 3];
        assert!(christofides_estimate(&r, &d).unwrap().value().abs() < 1e-12);
        // mean(X) = L + 1 - E[Y] = 1.9
        let r = [2, 2, 2, 2, 2, 2, 2, 2, 2, 1];
        assert!((christofides_estimate(&r, &d).unwrap().value() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_responses() {
        let d = CardDistribution::new(vec![0.2, 0.5, 0.3]).unwrap();
        assert!(christofides_estimate(&[], &d).is_err());
        assert!(christofides_estimate(&[0, 1], &d).is_err());
        assert!(christofides_estimate(&[4], &d).is_err());
        let w = WarnerParams::new(0.25).unwrap();
        assert!(warner_estimate(&[], &w).is_err());
        let spec = MechanismSpec::Warner(w);
        assert!(estimate(&spec, &Responses::Numeric(vec![1])).is_err());
    }
}
