use serde::{Deserialize, Serialize};

use crate::analytics::estimate;
use crate::error::{Error, Result};
use crate::mechanisms::{CardDistribution, Deck, MechanismSpec, Population, Responses};

/// Largest census enumerated unless a different cap is given.
pub const DEFAULT_ORACLE_CAP: usize = 8;

/// Exact moments of the estimator over every random outcome of a survey.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExactResult {
    pub mean: f64,
    pub variance: f64,
    /// Number of distinct outcomes enumerated.
    pub outcomes: u128,
}

/// Exact mean and variance of the estimator for a census of `pop`, with the
/// default size cap.
pub fn exact_oracle(spec: &MechanismSpec, pop: &Population) -> Result<ExactResult> {
    exact_oracle_with_cap(spec, pop, DEFAULT_ORACLE_CAP)
}

/// As [`exact_oracle`] with an explicit cap on `N`.
///
/// Warner, Simmons and Christofides enumerate the product measure of
/// per-respondent outcomes. The deck design enumerates how many cards of
/// each value land in the sensitive group, weighted by multivariate
/// hypergeometric probabilities; it requires `N p_k` to be integral.
pub fn exact_oracle_with_cap(
    spec: &MechanismSpec,
    pop: &Population,
    cap: usize,
) -> Result<ExactResult> {
    check_cap(pop.len(), cap)?;
    match spec {
        MechanismSpec::ImprovedChristofides { distribution } => deck_oracle(distribution, pop),
        _ => {
            let per_respondent: Vec<Vec<(u32, f64)>> = pop
                .bits()
                .iter()
                .map(|&x| respondent_outcomes(spec, x))
                .collect();
            product_oracle(spec, &per_respondent, pop.len(), cap)
        }
    }
}

/// Exact moments of the classic estimator that samples `N` respondents
/// uniformly with replacement from `pop`. Not defined for the deck design.
pub fn exact_oracle_with_replacement(
    spec: &MechanismSpec,
    pop: &Population,
    cap: usize,
) -> Result<ExactResult> {
    if let MechanismSpec::ImprovedChristofides { .. } = spec {
        return Err(Error::Unsupported(
            "the deck design has no with-replacement counterpart".into(),
        ));
    }
    check_cap(pop.len(), cap)?;
    let pi = pop.true_proportion();
    // one draw: pick a respondent, then perturb
    let mut draw: Vec<(u32, f64)> = Vec::new();
    for (x, w) in [(true, pi), (false, 1.0 - pi)] {
        if w == 0.0 {
            continue;
        }
        for (r, q) in respondent_outcomes(spec, x) {
            draw.push((r, w * q));
        }
    }
    let per_draw = vec![draw; pop.len()];
    product_oracle(spec, &per_draw, pop.len(), cap)
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::InstanceTooLarge {
            n,
            cap,
            outcomes: 0,
        });
    }
    Ok(())
}

/// `(response, probability)` for one respondent. Binary responses are coded
/// 0/1. Zero-probability branches are dropped.
fn respondent_outcomes(spec: &MechanismSpec, x: bool) -> Vec<(u32, f64)> {
    let bit = |b: bool| b as u32;
    let outcomes = match spec {
        MechanismSpec::Warner(w) => vec![(bit(x), w.p()), (bit(!x), 1.0 - w.p())],
        MechanismSpec::Simmons(s) => {
            let q = 1.0 - s.p();
            // truthful, unrelated-yes, unrelated-no
            vec![
                (bit(x), s.p()),
                (1, q * s.pi_b()),
                (0, q * (1.0 - s.pi_b())),
            ]
        }
        MechanismSpec::Christofides { distribution }
        | MechanismSpec::ImprovedChristofides { distribution } => {
            let l = distribution.card_values();
            (1..=l)
                .map(|k| {
                    let reported = if x { l + 1 - k } else { k };
                    (reported as u32, distribution.proportion(k))
                })
                .collect()
        }
    };
    outcomes.into_iter().filter(|(_, p)| *p > 0.0).collect()
}

fn to_responses(spec: &MechanismSpec, values: Vec<u32>) -> Responses {
    match spec {
        MechanismSpec::Warner(_) | MechanismSpec::Simmons(_) => {
            Responses::Binary(values.into_iter().map(|v| v == 1).collect())
        }
        _ => Responses::Numeric(values),
    }
}

fn product_oracle(
    spec: &MechanismSpec,
    choices: &[Vec<(u32, f64)>],
    n: usize,
    cap: usize,
) -> Result<ExactResult> {
    let total: u128 = choices.iter().map(|c| c.len() as u128).product();
    // guards against wide card alphabets even when N is under the cap
    if total > 1u128 << 24 {
        return Err(Error::InstanceTooLarge {
            n,
            cap,
            outcomes: total,
        });
    }
    let mut index = vec![0usize; choices.len()];
    let mut points = Vec::with_capacity(total as usize);
    loop {
        let mut weight = 1.0;
        let mut values = Vec::with_capacity(choices.len());
        for (c, &i) in choices.iter().zip(&index) {
            values.push(c[i].0);
            weight *= c[i].1;
        }
        let value = estimate(spec, &to_responses(spec, values))?.value();
        points.push((value, weight));

        // odometer
        let mut pos = 0;
        loop {
            if pos == index.len() {
                return Ok(moments(&points));
            }
            index[pos] += 1;
            if index[pos] < choices[pos].len() {
                break;
            }
            index[pos] = 0;
            pos += 1;
        }
    }
}

fn deck_oracle(dist: &CardDistribution, pop: &Population) -> Result<ExactResult> {
    let n = pop.len();
    let deck = Deck::build(n as u64, dist)?;
    let counts = deck.initial_counts().to_vec();
    for (k, c) in counts.iter().enumerate() {
        let exact = n as f64 * dist.proportion(k + 1);
        if (exact - *c as f64).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!(
                "exact deck oracle needs integral N p_k; N p_{} = {exact}",
                k + 1
            )));
        }
    }
    let l = counts.len();
    let members = pop.members();
    let all = binomial(n as u64, members as u64);
    let mut points = Vec::new();
    let mut alloc = vec![0u64; l];
    allocations(&counts, members as u64, 0, &mut alloc, &mut |a| {
        let ways: f64 = a
            .iter()
            .zip(&counts)
            .map(|(ak, nk)| binomial(*nk, *ak))
            .product();
        let mut responses = Vec::with_capacity(n);
        for (i, (&ak, &nk)) in a.iter().zip(&counts).enumerate() {
            let k = i + 1;
            responses.extend(std::iter::repeat_n((l + 1 - k) as u32, ak as usize));
            responses.extend(std::iter::repeat_n(k as u32, (nk - ak) as usize));
        }
        points.push((responses, ways / all));
    });
    let mut weighted = Vec::with_capacity(points.len());
    for (responses, w) in points {
        let value = estimate(
            &MechanismSpec::ImprovedChristofides {
                distribution: dist.clone(),
            },
            &Responses::Numeric(responses),
        )?
        .value();
        weighted.push((value, w));
    }
    Ok(moments(&weighted))
}

/// Calls `visit` with every `a` such that `sum a = m` and `a_k <= counts_k`.
fn allocations(
    counts: &[u64],
    m: u64,
    pos: usize,
    a: &mut Vec<u64>,
    visit: &mut impl FnMut(&[u64]),
) {
    if pos == counts.len() - 1 {
        if m <= counts[pos] {
            a[pos] = m;
            visit(a);
        }
        return;
    }
    for take in 0..=counts[pos].min(m) {
        a[pos] = take;
        allocations(counts, m - take, pos + 1, a, visit);
    }
}

fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as f64
}

fn moments(points: &[(f64, f64)]) -> ExactResult {
    let mass: f64 = points.iter().map(|(_, w)| w).sum();
    let mean = points.iter().map(|(v, w)| v * w).sum::<f64>() / mass;
    let variance = points
        .iter()
        .map(|(v, w)| w * (v - mean) * (v - mean))
        .sum::<f64>()
        / mass;
    ExactResult {
        mean,
        variance,
        outcomes: points.len() as u128,
    }
}
