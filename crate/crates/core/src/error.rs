use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("grid mismatch: operands are sampled on different grids")]
    GridMismatch,

    #[error("eigensolver did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("broken supersymmetry: mode has {sign_changes} sign change(s), a nodeless zero mode is required")]
    BrokenSusy { sign_changes: usize },

    #[error("trusted window too small: {points} points (need at least {required})")]
    WindowTooSmall { points: usize, required: usize },

    #[error("singular parameter lambda = {lambda}{}; excluded interval is [{lo}, {hi}]", location(.x))]
    SingularParameter {
        lambda: f64,
        x: Option<f64>,
        lo: f64,
        hi: f64,
    },

    #[error("lambda = {lambda} sits at the lower end of the excluded interval (Abraham-Moses limit, not supported)")]
    AbrahamMosesLimit { lambda: f64, lo: f64, hi: f64 },

    #[error("lambda = {lambda} sits at the upper end of the excluded interval (Pursey limit, not supported)")]
    PurseyLimit { lambda: f64, lo: f64, hi: f64 },

    #[error("deformation chain aborted at step {step}: {source}")]
    ChainStep {
        step: usize,
        #[source]
        source: Box<Error>,
    },
}

fn location(x: &Option<f64>) -> String {
    match x {
        Some(x) => format!(": denominator vanishes near x = {x}"),
        None => String::new(),
    }
}

impl Error {
    /// The excluded parameter interval carried by singular-parameter errors.
    pub fn excluded_interval(&self) -> Option<(f64, f64)> {
        match self {
            Error::SingularParameter { lo, hi, .. }
            | Error::AbrahamMosesLimit { lo, hi, .. }
            | Error::PurseyLimit { lo, hi, .. } => Some((*lo, *hi)),
            Error::ChainStep { source, .. } => source.excluded_interval(),
            _ => None,
        }
    }

    pub fn is_singular_parameter(&self) -> bool {
        self.excluded_interval().is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_is_found_through_chain_steps() {
        let inner = Error::SingularParameter {
            lambda: -0.5,
            x: Some(0.0),
            lo: -1.0,
            hi: 0.0,
        };
        let wrapped = Error::ChainStep {
            step: 2,
            source: Box::new(inner.clone()),
        };
        assert_eq!(wrapped.excluded_interval(), Some((-1.0, 0.0)));
        assert!(wrapped.is_singular_parameter());
        assert!(wrapped.to_string().contains("step 2"));
        assert!(inner.to_string().contains("x = 0"));
        assert!(!Error::GridMismatch.is_singular_parameter());
    }
}
