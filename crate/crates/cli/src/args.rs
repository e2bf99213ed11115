use std::path::PathBuf;
use std::str::FromStr;

use bgbs::wishart_bounds::AlphaSpec;
use clap::{Parser, ValueEnum};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Ensemble click statistics against the analytic predictions.
    ClickStats,
    /// Edelman estimate of log Z against sampled Wishart values.
    ZCalib,
    /// The I ratio over a range of mode counts.
    IRatio,
    /// Embed a random permanent with collisions and recover it.
    EmbedDemo,
    /// Empirical violation rates of the random-matrix tail bounds.
    ValidateBounds,
    /// Sector masses by enumeration against the pair-number distribution.
    DistCheck,
    /// Size statistics of the embedding prefactor.
    XiStats,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// An `α` grid value: a number, or `<coef>m^<exp>` that scales with the mode count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaArg(pub AlphaSpec);

impl FromStr for AlphaArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let Some((coef, exp)) = s.split_once("m^") else {
            return s
                .parse::<f64>()
                .map(|v| AlphaArg(AlphaSpec::Fixed(v)))
                .map_err(|_| format!("cannot read alpha '{s}'; expected a number or e.g. 2m^1/4"));
        };
        let coefficient = match coef.trim_end_matches('*') {
            "" => 1.0,
            c => c.parse::<f64>().map_err(|_| format!("bad coefficient in alpha '{s}'"))?,
        };
        let exponent = match exp.split_once('/') {
            Some((n, d)) => {
                let (n, d): (f64, f64) = (
                    n.parse().map_err(|_| format!("bad exponent in alpha '{s}'"))?,
                    d.parse().map_err(|_| format!("bad exponent in alpha '{s}'"))?,
                );
                n / d
            }
            None => exp.parse().map_err(|_| format!("bad exponent in alpha '{s}'"))?,
        };
        Ok(AlphaArg(AlphaSpec::Power { coefficient, exponent }))
    }
}

/// Reproducible experiment runner for bipartite Gaussian boson sampling.
///
/// List-valued options take comma-separated values, e.g. `--m 16,32,64`.
#[derive(Debug, Clone, Parser)]
#[command(name = "bgbs", version)]
pub struct Args {
    #[arg(long, value_enum)]
    pub command: Command,

    /// Mode counts.
    #[arg(long, value_delimiter = ',')]
    pub m: Vec<usize>,

    /// Photon densities per mode.
    #[arg(long, value_delimiter = ',')]
    pub mu: Vec<f64>,

    /// Wishart scale values: numbers or forms like 2m^1/4.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub alpha: Vec<AlphaArg>,

    /// Collision count for xi-stats; largest pair sector for dist-check.
    #[arg(long)]
    pub k: Option<usize>,

    #[arg(long)]
    pub trials: Option<usize>,

    #[arg(long, default_value_t = 1)]
    pub seed: u64,

    /// Output file; stdout when absent. A `<out>.meta.json` sidecar is written next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum)]
    pub format: Option<Format>,

    /// Worker threads, 0 for one per core. Results do not depend on it.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,

    /// Row repetitions for embed-demo.
    #[arg(long, value_delimiter = ',')]
    pub s: Vec<usize>,

    /// Column repetitions for embed-demo.
    #[arg(long, value_delimiter = ',')]
    pub t: Vec<usize>,

    /// Failure probabilities for validate-bounds.
    #[arg(long, value_delimiter = ',')]
    pub delta: Vec<f64>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_forms() {
        assert_eq!("3".parse::<AlphaArg>().unwrap().0, AlphaSpec::Fixed(3.0));
        assert_eq!(
            "2m^1/4".parse::<AlphaArg>().unwrap().0,
            AlphaSpec::Power { coefficient: 2.0, exponent: 0.25 }
        );
        assert_eq!(
            "m^0.125".parse::<AlphaArg>().unwrap().0,
            AlphaSpec::Power { coefficient: 1.0, exponent: 0.125 }
        );
        assert!("two".parse::<AlphaArg>().is_err());
        assert!("2m^x".parse::<AlphaArg>().is_err());
    }
}
