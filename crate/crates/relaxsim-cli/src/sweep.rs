//! Time sweeps across the three relaxation models and record IO.
//!
//! CSV schema: one row per (t, model); columns `t, model`, then
//! `re_rho_ij, im_rho_ij` for the upper triangle i ≤ j (20 real columns),
//! then `concurrence`. Values carry 17 significant digits so parsing an
//! emitted file reproduces the in-memory records bit-exactly.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use relaxsim::channels::quadrupolar_channel;
use relaxsim::circuit::{build_circuit, evolve_open, CircuitAngles, CircuitKind};
use relaxsim::qmatrix::{ComplexMatrix, DensityMatrix, C64};
use relaxsim::redfield::{
    channel_params_from_spectral, concurrence, make_state, redfield_evolve, RelaxationParams,
};

use crate::config::{Model, OutputFormat, SweepConfig};
use crate::{CliError, Result};

/// Upper-triangle element pairs in CSV column order.
pub const UPPER_TRIANGLE: [(usize, usize); 10] = [
    (0, 0),
    (0, 1),
    (0, 2),
    (0, 3),
    (1, 1),
    (1, 2),
    (1, 3),
    (2, 2),
    (2, 3),
    (3, 3),
];

fn element_key(i: usize, j: usize) -> String {
    format!("rho_{i}{j}")
}

/// One sweep sample: all sixteen density-matrix elements, the deviation from
/// I/4, and the concurrence, labeled by time and model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub t: f64,
    pub model: Model,
    /// Keys `rho_00` … `rho_33`, values (re, im).
    pub elements: BTreeMap<String, (f64, f64)>,
    /// Same keys; ρ − I/4.
    pub deviation: BTreeMap<String, (f64, f64)>,
    pub concurrence: f64,
}

impl SweepRecord {
    pub fn from_state(t: f64, model: Model, rho: &DensityMatrix) -> Result<Self> {
        let mut elements = BTreeMap::new();
        for i in 0..4 {
            for j in 0..4 {
                let z = rho.element(i, j);
                elements.insert(element_key(i, j), (z.re, z.im));
            }
        }
        let deviation = deviation_from_elements(&elements);
        let concurrence = concurrence(rho).map_err(CliError::Lib)?;
        Ok(Self {
            t,
            model,
            elements,
            deviation,
            concurrence,
        })
    }

    pub fn element(&self, i: usize, j: usize) -> (f64, f64) {
        self.elements[&element_key(i, j)]
    }

    /// Reassembles the stored elements into a validated density matrix.
    pub fn to_density(&self) -> Result<DensityMatrix> {
        let mat = ComplexMatrix::from_fn(4, |i, j| {
            let (re, im) = self.element(i, j);
            C64::new(re, im)
        });
        DensityMatrix::new(mat).map_err(CliError::Lib)
    }
}

fn deviation_from_elements(
    elements: &BTreeMap<String, (f64, f64)>,
) -> BTreeMap<String, (f64, f64)> {
    let mut deviation = BTreeMap::new();
    for i in 0..4 {
        for j in 0..4 {
            let key = element_key(i, j);
            let (re, im) = elements[&key];
            let shift = if i == j { 0.25 } else { 0.0 };
            deviation.insert(key, (re - shift, im));
        }
    }
    deviation
}

fn evolve_one(
    model: Model,
    rho0: &DensityMatrix,
    cfg: &SweepConfig,
    params: &RelaxationParams,
    t: f64,
) -> Result<DensityMatrix> {
    let out = match model {
        Model::Redfield => {
            let eq = DensityMatrix::maximally_mixed(4);
            redfield_evolve(rho0, &eq, &cfg.spectral, t)?
        }
        Model::Channel => quadrupolar_channel(params)?.apply(rho0)?,
        Model::Circuit => {
            let (circuit, env) = build_circuit(
                CircuitKind::Quadrupolar,
                &CircuitAngles::quadrupolar(params),
            )?;
            evolve_open(&circuit, rho0, &env)?
        }
    };
    Ok(out)
}

/// Runs the sweep and, when an output path is configured, writes the records
/// in the requested format. Records are ordered by (t, model).
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRecord>> {
    cfg.validate()?;
    let models = cfg.sorted_models();
    if cfg.gpd_only && models != [Model::Channel] {
        return Err(CliError::Config(
            "gpd-only mode supports only the channel model".into(),
        ));
    }
    let rho0 = make_state(cfg.state_kind, cfg.epsilon)?;

    let mut records = Vec::with_capacity(cfg.steps * models.len());
    for t in cfg.time_grid() {
        let mut params = channel_params_from_spectral(&cfg.spectral, 0.5, 0.5, t)?;
        if cfg.gpd_only {
            params.gamma_a = 0.0;
            params.gamma_b = 0.0;
        }
        for &model in &models {
            let rho_t = evolve_one(model, &rho0, cfg, &params, t)?;
            records.push(SweepRecord::from_state(t, model, &rho_t)?);
        }
    }

    if let Some(path) = &cfg.output_path {
        write_records(&records, path, cfg.output_format)?;
    }
    Ok(records)
}

fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_csv<W: Write>(records: &[SweepRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["t".to_string(), "model".to_string()];
    for (i, j) in UPPER_TRIANGLE {
        header.push(format!("re_rho_{i}{j}"));
        header.push(format!("im_rho_{i}{j}"));
    }
    header.push("concurrence".to_string());
    w.write_record(&header).map_err(csv_err)?;

    for rec in records {
        let mut row = vec![fmt17(rec.t), rec.model.name().to_string()];
        for (i, j) in UPPER_TRIANGLE {
            let (re, im) = rec.element(i, j);
            row.push(fmt17(re));
            row.push(fmt17(im));
        }
        row.push(fmt17(rec.concurrence));
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush().map_err(|e| CliError::Io {
        path: "<csv writer>".into(),
        message: e.to_string(),
    })
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Parse {
        path: "<csv>".into(),
        message: e.to_string(),
    }
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<SweepRecord>> {
    let mut r = csv::Reader::from_reader(input);
    let headers = r.headers().map_err(csv_err)?.clone();
    let expected_cols = 3 + 2 * UPPER_TRIANGLE.len();
    if headers.len() != expected_cols {
        return Err(CliError::Parse {
            path: "<csv>".into(),
            message: format!("expected {expected_cols} columns, found {}", headers.len()),
        });
    }
    let parse = |s: &str| -> Result<f64> {
        s.parse::<f64>().map_err(|e| CliError::Parse {
            path: "<csv>".into(),
            message: format!("bad float '{s}': {e}"),
        })
    };
    let mut records = Vec::new();
    for row in r.records() {
        let row = row.map_err(csv_err)?;
        let t = parse(&row[0])?;
        let model: Model = row[1].parse()?;
        let mut elements = BTreeMap::new();
        for (k, (i, j)) in UPPER_TRIANGLE.iter().enumerate() {
            let re = parse(&row[2 + 2 * k])?;
            let im = parse(&row[3 + 2 * k])?;
            elements.insert(element_key(*i, *j), (re, im));
            if i != j {
                // Hermiticity fills the lower triangle.
                elements.insert(element_key(*j, *i), (re, -im));
            }
        }
        let concurrence = parse(&row[row.len() - 1])?;
        let deviation = deviation_from_elements(&elements);
        records.push(SweepRecord {
            t,
            model,
            elements,
            deviation,
            concurrence,
        });
    }
    Ok(records)
}

pub fn write_json<W: Write>(records: &[SweepRecord], out: W) -> Result<()> {
    serde_json::to_writer_pretty(out, records).map_err(|e| CliError::Io {
        path: "<json writer>".into(),
        message: e.to_string(),
    })
}

pub fn read_json<R: Read>(input: R) -> Result<Vec<SweepRecord>> {
    serde_json::from_reader(input).map_err(|e| CliError::Parse {
        path: "<json>".into(),
        message: e.to_string(),
    })
}

pub fn write_records(records: &[SweepRecord], path: &Path, format: OutputFormat) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    match format {
        OutputFormat::Csv => write_csv(records, file),
        OutputFormat::Json => write_json(records, file),
    }
}

/// Loads records from a file, detecting the format from the extension.
pub fn load_records(path: &Path) -> Result<Vec<SweepRecord>> {
    let file = std::fs::File::open(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    match path.extension().and_then(|e| e.to_str()) {
        Some("json") => read_json(file),
        _ => read_csv(file),
    }
}
