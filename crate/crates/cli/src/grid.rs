use anyhow::{bail, Context};
use clap::ValueEnum;
use serde::Serialize;

use rrldp::mechanisms::MechanismKind;

/// Budget presets keyed by how harmful disclosure of the attribute would be.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SensitivityLevel {
    /// Data whose disclosure could cause material harm (health coverage,
    /// finances): epsilon from 0.05 to 0.5 in steps of 0.05.
    MaterialHarm,
}

impl SensitivityLevel {
    pub fn epsilons(&self) -> Vec<f64> {
        match self {
            SensitivityLevel::MaterialHarm => (1..=10).map(|i| i as f64 * 0.05).collect(),
        }
    }
}

/// Expands `all` and mechanism names or aliases, keeping order and dropping
/// repeats.
pub fn parse_mechanisms(items: &[String]) -> anyhow::Result<Vec<MechanismKind>> {
    let mut kinds = Vec::new();
    for item in items {
        let item = item.trim();
        let expanded = if item.eq_ignore_ascii_case("all") {
            MechanismKind::ALL.to_vec()
        } else {
            vec![item.parse::<MechanismKind>()?]
        };
        for k in expanded {
            if !kinds.contains(&k) {
                kinds.push(k);
            }
        }
    }
    if kinds.is_empty() {
        bail!("no mechanism given");
    }
    Ok(kinds)
}

/// Parses budgets given as plain values or inclusive `start:stop:step`
/// ranges.
pub fn parse_epsilons(items: &[String]) -> anyhow::Result<Vec<f64>> {
    let mut out = Vec::new();
    for item in items {
        let item = item.trim();
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [v] => out.push(number(v)?),
            [start, stop, step] => {
                let (start, stop, step) = (number(start)?, number(stop)?, number(step)?);
                if step.is_nan() || step <= 0.0 || stop < start {
                    bail!("bad range {item:?}: need start <= stop and step > 0");
                }
                let count = ((stop - start) / step + 1e-9).floor() as usize;
                out.extend((0..=count).map(|i| start + i as f64 * step));
            }
            _ => bail!("bad epsilon {item:?}: expected a number or start:stop:step"),
        }
    }
    if out.is_empty() {
        bail!("no epsilon given");
    }
    Ok(out)
}

fn number(s: &str) -> anyhow::Result<f64> {
    s.trim()
        .parse()
        .with_context(|| format!("{s:?} is not a number"))
}
