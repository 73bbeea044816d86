use std::fmt;
use std::sync::Arc;

use super::FamilyError;
use crate::fd::d1_richardson;

type ScalarFn = Arc<dyn Fn(f64) -> Result<f64, FamilyError> + Send + Sync>;

/// A real profile `r ↦ f(r)` with an analytic derivative when one is known.
#[derive(Clone)]
pub struct ProfileFunction {
    label: String,
    eval: ScalarFn,
    derivative: Option<ScalarFn>,
    fd_step: f64,
}

impl fmt::Debug for ProfileFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProfileFunction")
            .field("label", &self.label)
            .field("analytic_derivative", &self.derivative.is_some())
            .finish()
    }
}

impl ProfileFunction {
    pub fn new<F>(label: impl Into<String>, eval: F) -> Self
    where
        F: Fn(f64) -> Result<f64, FamilyError> + Send + Sync + 'static,
    {
        Self { label: label.into(), eval: Arc::new(eval), derivative: None, fd_step: 1e-2 }
    }

    pub fn with_derivative<F, D>(label: impl Into<String>, eval: F, derivative: D) -> Self
    where
        F: Fn(f64) -> Result<f64, FamilyError> + Send + Sync + 'static,
        D: Fn(f64) -> Result<f64, FamilyError> + Send + Sync + 'static,
    {
        Self { label: label.into(), eval: Arc::new(eval), derivative: Some(Arc::new(derivative)), fd_step: 1e-2 }
    }

    /// Wrap an infallible closure.
    pub fn from_fn<F>(label: impl Into<String>, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::new(label, move |r| Ok(f(r)))
    }

    pub fn constant(value: f64) -> Self {
        Self::with_derivative(format!("const {value}"), move |_| Ok(value), |_| Ok(0.0))
    }

    /// Initial step of the Richardson fallback.
    pub fn with_fd_step(mut self, h: f64) -> Self {
        self.fd_step = h;
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn has_analytic_derivative(&self) -> bool {
        self.derivative.is_some()
    }

    pub fn eval(&self, r: f64) -> Result<f64, FamilyError> {
        (self.eval)(r)
    }

    pub fn derivative(&self, r: f64) -> Result<f64, FamilyError> {
        if let Some(d) = &self.derivative {
            return d(r);
        }
        // surface evaluation errors instead of differencing NaNs
        self.eval(r)?;
        let (est, _) = d1_richardson(|x| self.eval(x).unwrap_or(f64::NAN), r, self.fd_step);
        if est.is_finite() {
            Ok(est)
        } else {
            Err(FamilyError::DomainError(format!("{}: derivative undefined near r = {r}", self.label)))
        }
    }
}
