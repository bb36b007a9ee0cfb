//! Size limits that keep enumeration at desk scale.
//!
//! Two budgets are tracked: the number of graphs a single enumeration may
//! produce, and the number of elementary coloring (or subgraph) steps a batch
//! computation may perform.

use crate::error::{Error, Result};

pub const DEFAULT_MAX_GRAPHS: u64 = 10_000_000;
pub const DEFAULT_MAX_STEPS: u64 = 1_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guards {
    pub max_graphs: u64,
    pub max_steps: u64,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            max_graphs: DEFAULT_MAX_GRAPHS,
            max_steps: DEFAULT_MAX_STEPS,
        }
    }
}

impl Guards {
    pub fn new(max_graphs: u64, max_steps: u64) -> Self {
        Guards {
            max_graphs,
            max_steps,
        }
    }

    pub fn unlimited() -> Self {
        Guards::new(u64::MAX, u64::MAX)
    }

    /// `count` is `None` when the true size overflowed `u64`.
    pub fn check_graphs(&self, what: &str, count: Option<u64>) -> Result<u64> {
        match count {
            Some(c) if c <= self.max_graphs => Ok(c),
            _ => Err(Error::GuardExceeded {
                what: what.to_string(),
                required: describe(count, "graphs"),
                limit: self.max_graphs,
                flag: "--max-graphs",
            }),
        }
    }

    pub fn check_steps(&self, what: &str, steps: Option<u64>) -> Result<u64> {
        match steps {
            Some(s) if s <= self.max_steps => Ok(s),
            _ => Err(Error::GuardExceeded {
                what: what.to_string(),
                required: describe(steps, "steps"),
                limit: self.max_steps,
                flag: "--max-steps",
            }),
        }
    }
}

fn describe(count: Option<u64>, unit: &str) -> String {
    match count {
        Some(c) => format!("{c} {unit}"),
        None => format!("more than {} {unit}", u64::MAX),
    }
}

/// Colorings visited when a polynomial on `n` vertices is interpolated from
/// the nodes `q = 1..=n+2`.
pub fn interpolation_steps(n: usize) -> Option<u64> {
    let exp = u32::try_from(n).ok()?;
    let mut total: u64 = 0;
    for q in 1..=(n as u64 + 2) {
        total = total.checked_add(q.checked_pow(exp)?)?;
    }
    Some(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolation_step_counts() {
        assert_eq!(interpolation_steps(1), Some(1 + 2 + 3));
        assert_eq!(interpolation_steps(2), Some(1 + 4 + 9 + 16));
        assert_eq!(interpolation_steps(40), None);
    }

    #[test]
    fn refusal_names_the_flag() {
        let g = Guards::new(10, 10);
        assert!(g.check_graphs("x", Some(10)).is_ok());
        let err = g.check_graphs("Γ(2,3)", Some(64)).unwrap_err();
        assert!(err.is_guard());
        assert!(err.to_string().contains("--max-graphs"));
        assert!(g.check_steps("x", None).unwrap_err().to_string().contains("--max-steps"));
    }
}
