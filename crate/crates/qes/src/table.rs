//! Sampled tables of potentials, wavefunctions and densities.

use std::io::Write;

use qes_core::closed_forms::{density, potential, wavefunction};
use qes_core::grid::{linspace, logspace};
use qes_core::{Convention, Error, QesParams};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Quantity {
    Potential,
    Wavefunction,
    Density,
}

impl Quantity {
    pub fn column(self) -> &'static str {
        match self {
            Quantity::Potential => "potential",
            Quantity::Wavefunction => "wavefunction",
            Quantity::Density => "density",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableSpec {
    pub quantity: Quantity,
    pub rho_min: f64,
    pub rho_max: f64,
    pub points: usize,
    pub spacing: Spacing,
    pub format: Format,
}

impl TableSpec {
    pub fn validate(&self) -> Result<(), Error> {
        if !(self.rho_min > 0.0) || !self.rho_max.is_finite() {
            return Err(Error::InvalidParameter { name: "rho-min", reason: "must be positive" });
        }
        if !(self.rho_min < self.rho_max) {
            return Err(Error::InvalidParameter { name: "rho-max", reason: "must exceed rho-min" });
        }
        if self.points < 2 {
            return Err(Error::InvalidParameter { name: "points", reason: "need at least two" });
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        match self.spacing {
            Spacing::Linear => linspace(self.rho_min, self.rho_max, self.points),
            Spacing::Log => logspace(self.rho_min, self.rho_max, self.points),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: [String; 2],
    pub rows: Vec<[f64; 2]>,
}

impl Table {
    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.rows.iter().map(|r| r[1])
    }
}

pub fn build(spec: &TableSpec, p: &QesParams, conv: Convention) -> Result<Table, Error> {
    spec.validate()?;
    if spec.quantity != Quantity::Potential {
        p.require_wavefunction()?;
    }
    let rows = spec
        .grid()
        .into_iter()
        .map(|rho| {
            let v = match spec.quantity {
                Quantity::Potential => potential(p, rho, conv)?,
                Quantity::Wavefunction => wavefunction::<f64>(p, rho)?,
                Quantity::Density => density(p, rho)?,
            };
            Ok([rho, v])
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(Table { columns: ["rho".into(), spec.quantity.column().into()], rows })
}

/// Write `table` in the requested format. Floats are written in shortest
/// round-trip form, so nothing is lost.
pub fn write<W: Write>(table: &Table, format: Format, out: W) -> std::io::Result<()> {
    match format {
        Format::Csv => write_csv(table, out),
        Format::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, table)?;
            writeln!(out)
        }
    }
}

fn write_csv<W: Write>(table: &Table, out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&table.columns)?;
    for row in &table.rows {
        w.serialize(row)?;
    }
    w.flush()
}
