//! The fourteen spectrum features of one signal.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mfdfa::MfdfaResult;
use crate::spectrum::spectrum_descriptors;

pub const FEATURE_COUNT: usize = 14;

/// Which of the two horizontal peak distances is called F7.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FeatureConvention {
    /// F7 = α_peak − α_min, F8 = α_peak − α_max.
    #[default]
    Literal,
    /// F7 = α_peak − α_max, F8 = α_peak − α_min.
    TableConsistent,
}

impl std::str::FromStr for FeatureConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "literal" => Ok(Self::Literal),
            "table-consistent" => Ok(Self::TableConsistent),
            other => Err(Error::InvalidParameter(format!("unknown feature convention {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub signal_id: String,
    /// F1..F14 in order.
    pub values: [f64; FEATURE_COUNT],
}

impl FeatureVector {
    /// Feature by its 1-based number.
    pub fn get(&self, number: usize) -> f64 {
        self.values[number - 1]
    }
}

pub fn feature_names() -> Vec<String> {
    (1..=FEATURE_COUNT).map(|i| format!("f{i}")).collect()
}

pub fn extract_features(result: &MfdfaResult, convention: FeatureConvention) -> Result<FeatureVector> {
    let h2 = result.hurst.at(2.0).ok_or(Error::MissingQ2)?;
    let d = spectrum_descriptors(&result.spectrum)?;
    let peak_to_min = d.alpha_peak - d.alpha_min;
    let peak_to_max = d.alpha_peak - d.alpha_max;
    let (f7, f8) = match convention {
        FeatureConvention::Literal => (peak_to_min, peak_to_max),
        FeatureConvention::TableConsistent => (peak_to_max, peak_to_min),
    };
    let values = [
        h2,
        d.alpha_peak,
        d.alpha_max,
        d.alpha_min,
        (d.alpha_max + d.alpha_min) / 2.0,
        d.alpha_max - d.alpha_min,
        f7,
        f8,
        d.f_at_alpha_max,
        d.f_at_alpha_min,
        (d.f_at_alpha_max + d.f_at_alpha_min) / 2.0,
        d.f_at_alpha_max - d.f_at_alpha_min,
        d.f_at_peak - d.f_at_alpha_min,
        d.f_at_peak - d.f_at_alpha_max,
    ];
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "feature f{} of {} is not finite",
            i + 1,
            result.signal_id
        )));
    }
    Ok(FeatureVector {
        signal_id: result.signal_id.clone(),
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mfdfa::{q_grid, FluctuationSurface, HurstCurve};
    use crate::spectrum::singularity_spectrum;
    use crate::synth::analytic_binomial_hurst;

    fn result_from(q: Vec<f64>, h: Vec<f64>) -> MfdfaResult {
        let hurst = HurstCurve::from_exponents(q.clone(), h);
        let spectrum = singularity_spectrum(&hurst).unwrap();
        MfdfaResult {
            signal_id: "s".into(),
            surface: FluctuationSurface {
                scales: vec![],
                q_values: q,
                values: vec![],
            },
            hurst,
            spectrum,
        }
    }

    #[test]
    fn monofractal_features() {
        let q = q_grid(-5.0, 5.0, 0.1);
        let r = result_from(q.clone(), vec![0.64; q.len()]);
        let f = extract_features(&r, FeatureConvention::Literal).unwrap();
        assert!((f.get(1) - 0.64).abs() < 1e-12);
        for i in [6, 7, 8, 12, 13, 14] {
            assert!(f.get(i).abs() < 1e-12, "f{i} = {}", f.get(i));
        }
        for i in [9, 10, 11] {
            assert!((f.get(i) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn cascade_features_and_identities() {
        let q = q_grid(-5.0, 5.0, 0.1);
        let h: Vec<f64> = q.iter().map(|&q| analytic_binomial_hurst(q, 0.65)).collect();
        let r = result_from(q, h);
        let lit = extract_features(&r, FeatureConvention::Literal).unwrap();
        assert!((lit.get(5) - (lit.get(3) + lit.get(4)) / 2.0).abs() < 1e-12);
        assert!((lit.get(6) - (lit.get(3) - lit.get(4))).abs() < 1e-12);
        assert!((lit.get(11) - (lit.get(9) + lit.get(10)) / 2.0).abs() < 1e-12);
        assert!((lit.get(12) - (lit.get(9) - lit.get(10))).abs() < 1e-12);
        assert!(lit.get(6) > 0.0);
        assert!(lit.get(7) >= 0.0 && lit.get(8) <= 0.0);

        let tab = extract_features(&r, FeatureConvention::TableConsistent).unwrap();
        assert_eq!(tab.get(7), lit.get(8));
        assert_eq!(tab.get(8), lit.get(7));
        assert!(tab.get(7) <= 0.0);
    }

    #[test]
    fn missing_q2() {
        let q = q_grid(-3.0, 1.0, 0.5);
        let r = result_from(q.clone(), vec![0.5; q.len()]);
        assert!(matches!(
            extract_features(&r, FeatureConvention::Literal),
            Err(Error::MissingQ2)
        ));
    }

    #[test]
    fn convention_parsing() {
        assert_eq!("literal".parse::<FeatureConvention>().unwrap(), FeatureConvention::Literal);
        assert_eq!(
            "table-consistent".parse::<FeatureConvention>().unwrap(),
            FeatureConvention::TableConsistent
        );
        assert!("swapped".parse::<FeatureConvention>().is_err());
    }
}
