use std::sync::atomic::{AtomicUsize, Ordering};

use super::{ProxOracle, SmoothOracle};
use crate::Vector;

/// Wraps a [`SmoothOracle`] and counts gradient and value evaluations.
pub struct CountingOracle<O> {
    inner: O,
    gradients: AtomicUsize,
    values: AtomicUsize,
}

impl<O> CountingOracle<O> {
    pub fn new(inner: O) -> Self {
        Self {
            inner,
            gradients: AtomicUsize::new(0),
            values: AtomicUsize::new(0),
        }
    }

    pub fn gradient_evals(&self) -> usize {
        self.gradients.load(Ordering::Relaxed)
    }

    pub fn value_evals(&self) -> usize {
        self.values.load(Ordering::Relaxed)
    }
}

impl<O: SmoothOracle> SmoothOracle for CountingOracle<O> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn value(&self, x: &Vector) -> f64 {
        self.values.fetch_add(1, Ordering::Relaxed);
        self.inner.value(x)
    }

    fn gradient(&self, x: &Vector) -> Vector {
        self.gradients.fetch_add(1, Ordering::Relaxed);
        self.inner.gradient(x)
    }

    fn value_and_gradient(&self, x: &Vector) -> (f64, Vector) {
        self.gradients.fetch_add(1, Ordering::Relaxed);
        self.values.fetch_add(1, Ordering::Relaxed);
        self.inner.value_and_gradient(x)
    }

    fn lipschitz(&self) -> f64 {
        self.inner.lipschitz()
    }

    fn strong_convexity(&self) -> Option<f64> {
        self.inner.strong_convexity()
    }
}

/// Wraps a [`ProxOracle`] and counts prox evaluations.
pub struct CountingProx<P> {
    inner: P,
    proxes: AtomicUsize,
}

impl<P> CountingProx<P> {
    pub fn new(inner: P) -> Self {
        Self {
            inner,
            proxes: AtomicUsize::new(0),
        }
    }

    pub fn prox_evals(&self) -> usize {
        self.proxes.load(Ordering::Relaxed)
    }
}

impl<P: ProxOracle> ProxOracle for CountingProx<P> {
    fn value(&self, x: &Vector) -> f64 {
        self.inner.value(x)
    }

    fn prox(&self, z: &Vector, zeta: f64) -> Vector {
        self.proxes.fetch_add(1, Ordering::Relaxed);
        self.inner.prox(z, zeta)
    }
}
