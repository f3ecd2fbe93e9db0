//! Reference-element bases and quadrature.

mod lagrange;
pub mod quadrature;
pub mod spatial;
pub mod time;

pub use lagrange::Lagrange1d;
pub use quadrature::{gauss_legendre, make_quadrature, QuadKind, QuadratureRule};
pub use spatial::{DualBasis, PrimalBasis};
pub use time::TimeBasis;

/// Velocity, stress and time bases of one discretization.
#[derive(Debug, Clone)]
pub struct SpaceTimeBasis {
    pub primal: PrimalBasis,
    pub dual: DualBasis,
    pub time: TimeBasis,
}

impl SpaceTimeBasis {
    pub fn new(p: usize, p_time: usize) -> crate::Result<Self> {
        Ok(Self {
            primal: PrimalBasis::new(p)?,
            dual: DualBasis::new(p)?,
            time: TimeBasis::new(p_time)?,
        })
    }

    pub fn degree(&self) -> usize {
        self.primal.degree()
    }

    pub fn n_phi(&self) -> usize {
        self.primal.len()
    }

    pub fn n_psi(&self) -> usize {
        self.dual.len()
    }

    pub fn n_gamma(&self) -> usize {
        self.time.len()
    }
}
