//! Uniformity tests for output sequences over `Z_p`.

use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Fewest outputs the tests accept.
pub const MIN_SAMPLES: usize = 100;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum StatsError {
    #[error("too few samples: {got}, need at least {need}")]
    TooFewSamples { got: usize, need: usize },
    #[error("value {value} outside Z_{p}")]
    OutOfRange { value: u64, p: u64 },
    #[error("modulus {0} too small")]
    TinyModulus(u64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: f64,
    pub p_value: f64,
}

fn chi_square(counts: &[u64]) -> ChiSquare {
    let total: u64 = counts.iter().sum();
    let expected = total as f64 / counts.len() as f64;
    let statistic = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum::<f64>();
    let dof = (counts.len() - 1) as f64;
    let p_value = ChiSquared::new(dof).expect("dof is positive").sf(statistic);
    ChiSquare {
        statistic,
        dof,
        p_value,
    }
}

/// Goodness of fit against the uniform law on `Z_p`.
pub fn gof(values: &[u64], p: u64) -> ChiSquare {
    let mut counts = vec![0u64; p as usize];
    for &v in values {
        counts[v as usize] += 1;
    }
    chi_square(&counts)
}

/// Non-overlapping pairs `(x_{2k}, x_{2k+1})` against the uniform law on
/// `Z_p^2`; an odd trailing value is dropped.
pub fn serial(values: &[u64], p: u64) -> ChiSquare {
    let mut counts = vec![0u64; (p * p) as usize];
    for pair in values.chunks_exact(2) {
        counts[(pair[0] * p + pair[1]) as usize] += 1;
    }
    chi_square(&counts)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UniformityReport {
    pub samples: usize,
    pub gof: ChiSquare,
    pub serial: ChiSquare,
}

impl UniformityReport {
    pub fn passes(&self, alpha: f64) -> bool {
        self.gof.p_value > alpha && self.serial.p_value > alpha
    }
}

pub fn uniformity(values: &[u64], p: u64) -> Result<UniformityReport, StatsError> {
    if p < 2 {
        return Err(StatsError::TinyModulus(p));
    }
    if values.len() < MIN_SAMPLES {
        return Err(StatsError::TooFewSamples {
            got: values.len(),
            need: MIN_SAMPLES,
        });
    }
    if let Some(&value) = values.iter().find(|&&v| v >= p) {
        return Err(StatsError::OutOfRange { value, p });
    }
    Ok(UniformityReport {
        samples: values.len(),
        gof: gof(values, p),
        serial: serial(values, p),
    })
}
