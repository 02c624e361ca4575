//! Representative parameter sets for the density, wavefunction and
//! potential plots.
//!
//! The parameter values here are our own choice. Each set satisfies its
//! class constraints, and the density grids are wide enough for the density
//! to fall off at both ends.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use qes_core::{Convention, Error, QesClass, QesParams};
use serde::Serialize;

use crate::table::{self, Format, Quantity, Spacing, Table, TableSpec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Preset {
    pub figure: u8,
    pub quantity: Quantity,
    pub class: QesClass,
    pub k: f64,
    pub tau: f64,
    pub b: f64,
    pub rho_min: f64,
    pub rho_max: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl Preset {
    pub fn params(&self) -> QesParams {
        QesParams::new(self.class, self.k, self.b, self.tau).expect("preset parameters are valid")
    }

    pub fn spec(&self) -> TableSpec {
        TableSpec {
            quantity: self.quantity,
            rho_min: self.rho_min,
            rho_max: self.rho_max,
            points: self.points,
            spacing: self.spacing,
            format: Format::Csv,
        }
    }

    pub fn file_name(&self) -> String {
        format!(
            "fig{}_{}_{}_k{}_tau{}_b{}.csv",
            self.figure,
            self.quantity.column(),
            self.class,
            self.k,
            self.tau,
            self.b
        )
    }

    pub fn table(&self) -> Result<Table, Error> {
        table::build(&self.spec(), &self.params(), Convention::default())
    }
}

/// Figure number, class and three `(k, tau, b)` sets.
type ProfileSet = (u8, QesClass, [(f64, f64, f64); 3]);

const PROFILE_SETS: [ProfileSet; 3] = [
    (1, QesClass::I, [(3.0, 4.0, 1.0), (4.0, 5.0, 1.0), (5.0, 8.0, 2.0)]),
    (2, QesClass::II, [(3.0, 4.0, 1.0), (4.0, 4.0, 2.0), (5.0, 6.0, 1.0)]),
    (3, QesClass::III, [(3.0, 4.0, 3.0), (3.0, 5.0, 2.0), (4.0, 6.0, 3.0)]),
];

const POTENTIAL_SETS: [(QesClass, f64, f64, f64); 3] = [
    (QesClass::I, 3.0, 4.0, 1.0),
    (QesClass::II, 3.0, 4.0, 1.0),
    (QesClass::III, 3.0, 5.0, 2.0),
];

/// Every preset: density and wavefunction profiles for the three classes,
/// then one potential per class.
pub fn presets() -> Vec<Preset> {
    let mut out = Vec::new();
    for (figure, class, sets) in PROFILE_SETS {
        for quantity in [Quantity::Density, Quantity::Wavefunction] {
            for (k, tau, b) in sets {
                out.push(Preset {
                    figure,
                    quantity,
                    class,
                    k,
                    tau,
                    b,
                    rho_min: 1e-7,
                    rho_max: 1e4,
                    points: 400,
                    spacing: Spacing::Log,
                });
            }
        }
    }
    for (class, k, tau, b) in POTENTIAL_SETS {
        out.push(Preset {
            figure: 4,
            quantity: Quantity::Potential,
            class,
            k,
            tau,
            b,
            rho_min: 0.05,
            rho_max: 10.0,
            points: 200,
            spacing: Spacing::Linear,
        });
    }
    out
}

#[derive(Serialize)]
struct Manifest<'a> {
    note: &'static str,
    convention: Convention,
    files: Vec<ManifestEntry<'a>>,
}

#[derive(Serialize)]
struct ManifestEntry<'a> {
    file: String,
    #[serde(flatten)]
    preset: &'a Preset,
}

/// Write every preset table plus `manifest.json` into `dir`.
pub fn write_all(dir: &Path) -> Result<Vec<PathBuf>, WriteError> {
    fs::create_dir_all(dir).map_err(WriteError::Io)?;
    let all = presets();
    let mut written = Vec::with_capacity(all.len() + 1);
    for p in &all {
        let t = p.table().map_err(WriteError::Model)?;
        let path = dir.join(p.file_name());
        let f = fs::File::create(&path).map_err(WriteError::Io)?;
        table::write(&t, Format::Csv, BufWriter::new(f)).map_err(WriteError::Io)?;
        written.push(path);
    }
    let manifest = Manifest {
        note: "artifact-chosen representative parameter sets",
        convention: Convention::default(),
        files: all.iter().map(|p| ManifestEntry { file: p.file_name(), preset: p }).collect(),
    };
    let path = dir.join("manifest.json");
    let mut f = BufWriter::new(fs::File::create(&path).map_err(WriteError::Io)?);
    serde_json::to_writer_pretty(&mut f, &manifest).map_err(|e| WriteError::Io(e.into()))?;
    writeln!(f).and_then(|_| f.flush()).map_err(WriteError::Io)?;
    written.push(path);
    Ok(written)
}

#[derive(Debug)]
pub enum WriteError {
    Io(std::io::Error),
    Model(Error),
}

impl std::fmt::Display for WriteError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WriteError::Io(e) => write!(f, "{e}"),
            WriteError::Model(e) => write!(f, "{e}"),
        }
    }
}

/// Nonnegative, small at both ends relative to the peak, and rising then
/// falling with no interior dip.
pub fn density_shape_ok(values: &[f64]) -> bool {
    let Some(&first) = values.first() else { return false };
    let last = *values.last().unwrap();
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if values.iter().any(|v| !(*v >= 0.0)) || !(max > 0.0) {
        return false;
    }
    if first >= 1e-3 * max || last >= 1e-3 * max {
        return false;
    }
    let peak = values.iter().position(|&v| v == max).unwrap();
    values[..=peak].windows(2).all(|w| w[0] <= w[1]) && values[peak..].windows(2).all(|w| w[0] >= w[1])
}
