use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A nonempty dataset of nonnegative observations, kept sorted ascending.
///
/// `order_stat(i)` is the i-th smallest value `X_{i,n}` (1-based).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Sample {
    values: Vec<f64>,
}

impl Sample {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Data("sample is empty".into()));
        }
        if let Some((i, &x)) = values
            .iter()
            .enumerate()
            .find(|(_, x)| !(**x >= 0.0) || x.is_infinite())
        {
            return Err(Error::Data(format!(
                "observation {} is {x}; values must be finite and nonnegative",
                i + 1
            )));
        }
        values.sort_by(f64::total_cmp);
        Ok(Self { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `X_{i,n}` for `1 <= i <= n`.
    pub fn order_stat(&self, i: usize) -> f64 {
        self.values[i - 1]
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.sum() / self.len() as f64
    }

    /// Every observation multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.values.iter().map(|x| x * c).collect())
    }
}

impl TryFrom<Vec<f64>> for Sample {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Sample::new(values)
    }
}

impl From<Sample> for Vec<f64> {
    fn from(sample: Sample) -> Self {
        sample.values
    }
}
