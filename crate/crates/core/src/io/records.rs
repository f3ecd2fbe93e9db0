use std::fs::File;
use std::path::Path;

use crate::error::Result;
use crate::scenarios::Receiver;
use crate::scheme::{Discretization, Energy, State, StepReport};

pub const ENERGY_HEADER: [&str; 4] = ["t", "kinetic", "elastic", "total"];
pub const STATS_HEADER: [&str; 4] = ["step", "t", "iterations", "residual"];
pub const SEISMOGRAM_HEADER: [&str; 6] = ["t", "u", "v", "sxx", "syy", "sxy"];

pub(crate) fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn writer(path: &Path, header: &[&str]) -> Result<csv::Writer<File>> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    Ok(w)
}

/// `energy.csv`: total energy at the end of every slab.
pub struct EnergyLog(csv::Writer<File>);

impl EnergyLog {
    pub fn create(path: impl AsRef<Path>) -> Result<Self> {
        Ok(Self(writer(path.as_ref(), &ENERGY_HEADER)?))
    }

    pub fn record(&mut self, t: f64, e: Energy) -> Result<()> {
        self.0
            .write_record([num(t), num(e.kinetic), num(e.elastic), num(e.total())])?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        self.0.flush()?;
        Ok(())
    }
}

/// `stats.csv`: Krylov iterations and final residual per slab.
pub struct StatsLog(csv::Writer<File>);

impl StatsLog {
    pub fn create(path: impl AsRef<Path>) -> Result<Self> {
        Ok(Self(writer(path.as_ref(), &STATS_HEADER)?))
    }

    pub fn record(&mut self, r: &StepReport) -> Result<()> {
        self.0
            .write_record([r.step.to_string(), num(r.time), r.iterations.to_string(), num(r.residual)])?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        self.0.flush()?;
        Ok(())
    }
}

/// Receiver resolved to its containing element (the lowest-index one when it
/// lies on an element boundary) and the nearest edge of that element, whose
/// dual cell supplies the stress.
#[derive(Debug, Clone, PartialEq)]
pub struct Probe {
    pub id: String,
    pub position: [f64; 2],
    pub element: usize,
    pub edge: usize,
}

impl Probe {
    pub fn resolve(disc: &Discretization, r: &Receiver) -> Result<Self> {
        let element = disc.mesh.primal.locate_closed(r.position)?;
        Ok(Self {
            id: r.id.clone(),
            position: r.position,
            element,
            edge: disc.nearest_edge(element, r.position),
        })
    }

    /// `(u, v, sxx, syy, sxy)` at the end of the slab.
    pub fn sample(&self, disc: &Discretization, state: &State) -> [f64; 5] {
        let v = disc.velocity_at(state, self.element, self.position, 1.0);
        let s = disc.stress_at(state, self.element, self.edge, self.position, 1.0);
        [v[0], v[1], s[0], s[1], s[2]]
    }
}

/// `receiver_<id>.csv` for each receiver.
pub struct Seismograms {
    probes: Vec<(Probe, csv::Writer<File>)>,
}

impl Seismograms {
    pub fn create(disc: &Discretization, receivers: &[Receiver], dir: impl AsRef<Path>) -> Result<Self> {
        let probes = receivers
            .iter()
            .map(|r| {
                let p = Probe::resolve(disc, r)?;
                let w = writer(&dir.as_ref().join(format!("receiver_{}.csv", r.id)), &SEISMOGRAM_HEADER)?;
                Ok((p, w))
            })
            .collect::<Result<_>>()?;
        Ok(Self { probes })
    }

    pub fn record(&mut self, disc: &Discretization, state: &State) -> Result<()> {
        for (p, w) in &mut self.probes {
            let s = p.sample(disc, state);
            let mut row = vec![num(state.time)];
            row.extend(s.iter().map(|&x| num(x)));
            w.write_record(&row)?;
        }
        Ok(())
    }

    pub fn finish(self) -> Result<()> {
        for (_, mut w) in self.probes {
            w.flush()?;
        }
        Ok(())
    }
}
