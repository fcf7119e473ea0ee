use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Space-time coefficient `h(x, t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum Potential {
    Constant {
        c: f64,
    },
    /// `(1 + d(x, x₀))^a (1 + t)^b`.
    RadialTemporal {
        a: f64,
        b: f64,
    },
    /// Time-independent, one value per vertex.
    Table {
        values: Vec<f64>,
    },
}

impl Default for Potential {
    fn default() -> Self {
        Potential::Constant { c: 1.0 }
    }
}

impl Potential {
    pub fn one() -> Self {
        Self::default()
    }

    #[inline]
    pub fn eval(&self, x: usize, d: f64, t: f64) -> f64 {
        match self {
            Potential::Constant { c } => *c,
            Potential::RadialTemporal { a, b } => {
                let space = if *a == 0.0 { 1.0 } else { (1.0 + d).powf(*a) };
                let time = if *b == 0.0 { 1.0 } else { (1.0 + t).powf(*b) };
                space * time
            }
            Potential::Table { values } => values[x],
        }
    }

    pub fn is_time_independent(&self) -> bool {
        !matches!(self, Potential::RadialTemporal { b, .. } if *b != 0.0)
    }

    pub fn check_domain(&self, n: usize) -> Result<()> {
        match self {
            Potential::Table { values } if values.len() != n => Err(Error::DomainMismatch {
                expected: n,
                got: values.len(),
            }),
            _ => Ok(()),
        }
    }

    /// `h(x, t)^{−γ}`, failing on nonpositive samples.
    #[inline]
    pub fn inverse_power(&self, x: usize, d: f64, t: f64, gamma: f64) -> Result<f64> {
        let h = self.eval(x, d, t);
        if h > 0.0 && h.is_finite() {
            Ok(if gamma == 0.0 { 1.0 } else { h.powf(-gamma) })
        } else {
            Err(Error::NonpositivePotential { vertex: x, t, value: h })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluation() {
        let h = Potential::RadialTemporal { a: 2.0, b: -1.0 };
        assert_eq!(h.eval(0, 1.0, 1.0), 2.0);
        assert!(!h.is_time_independent());
        assert!(Potential::RadialTemporal { a: 1.0, b: 0.0 }.is_time_independent());
        let t = Potential::Table { values: vec![1.0, 0.0] };
        assert!(t.inverse_power(1, 0.0, 0.0, 1.0).is_err());
        assert!(t.check_domain(3).is_err());
        assert_eq!(Potential::Constant { c: 4.0 }.inverse_power(0, 0.0, 0.0, 0.5).unwrap(), 0.5);
    }

    #[test]
    fn json_forms() {
        let h: Potential = serde_json::from_str(r#"{"form":"radial_temporal","a":1,"b":0.5}"#).unwrap();
        assert_eq!(h, Potential::RadialTemporal { a: 1.0, b: 0.5 });
        let s = serde_json::to_string(&Potential::Constant { c: 2.0 }).unwrap();
        assert_eq!(s, r#"{"form":"constant","c":2.0}"#);
    }
}
