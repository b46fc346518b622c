//! Human-readable dumps of Kraus channels and dilation circuits.

use std::collections::HashMap;

use relaxsim::channels::{gad, gpd, pd, quadrupolar_channel, KrausChannel};
use relaxsim::circuit::{build_circuit, CircuitAngles, CircuitKind};
use relaxsim::qmatrix::ComplexMatrix;
use relaxsim::redfield::{channel_params_from_spectral, RelaxationParams, SpectralDensities};

use crate::{CliError, Result};

/// Parses `key=value,key=value` parameter lists.
pub fn parse_params(spec: &str) -> Result<HashMap<String, f64>> {
    let mut out = HashMap::new();
    if spec.trim().is_empty() {
        return Ok(out);
    }
    for piece in spec.split(',') {
        let (key, value) = piece.split_once('=').ok_or_else(|| {
            CliError::Config(format!("bad parameter '{piece}', expected key=value"))
        })?;
        let parsed: f64 = value
            .trim()
            .parse()
            .map_err(|e| CliError::Config(format!("bad value for '{key}': {e}")))?;
        out.insert(key.trim().to_string(), parsed);
    }
    Ok(out)
}

fn need(params: &HashMap<String, f64>, key: &str, what: &str) -> Result<f64> {
    params
        .get(key)
        .copied()
        .ok_or_else(|| CliError::Config(format!("{what} requires --params {key}=<value>")))
}

/// Relaxation parameters from a key=value map: either explicit
/// gamma_a/gamma_b/lambda (plus optional p_a/p_b), or `t=<seconds>` resolved
/// through the spectral-density map.
pub fn relaxation_params(
    params: &HashMap<String, f64>,
    sd: &SpectralDensities,
) -> Result<RelaxationParams> {
    let p_a = params.get("p_a").copied().unwrap_or(0.5);
    let p_b = params.get("p_b").copied().unwrap_or(0.5);
    if let Some(&t) = params.get("t") {
        return Ok(channel_params_from_spectral(sd, p_a, p_b, t)?);
    }
    let gamma_a = need(params, "gamma_a", "quadrupolar")?;
    let gamma_b = need(params, "gamma_b", "quadrupolar")?;
    let lambda = need(params, "lambda", "quadrupolar")?;
    Ok(RelaxationParams::new(
        gamma_a, gamma_b, lambda, p_a, p_b, 0.0,
    )?)
}

fn format_matrix(m: &ComplexMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.dim() {
        let row: Vec<String> = (0..m.dim())
            .map(|j| {
                let z = m[(i, j)];
                format!("{:+.6}{:+.6}i", z.re, z.im)
            })
            .collect();
        out.push_str(&format!("  [ {} ]\n", row.join(", ")));
    }
    out
}

fn build_channel(
    name: &str,
    params: &HashMap<String, f64>,
    sd: &SpectralDensities,
) -> Result<KrausChannel> {
    match name {
        "gad" => Ok(gad(
            need(params, "gamma", "gad")?,
            need(params, "p", "gad")?,
        )?),
        "pd" => Ok(pd(need(params, "lambda", "pd")?)?),
        "gpd" => Ok(gpd(need(params, "lambda", "gpd")?)?),
        "quadrupolar" => Ok(quadrupolar_channel(&relaxation_params(params, sd)?)?),
        other => Err(CliError::Config(format!(
            "unknown channel '{other}' (expected gad, pd, gpd, or quadrupolar)"
        ))),
    }
}

/// Operators and Choi eigenvalues of a named channel.
pub fn kraus_dump(
    name: &str,
    params: &HashMap<String, f64>,
    sd: &SpectralDensities,
) -> Result<String> {
    let ch = build_channel(name, params, sd)?;
    let mut out = format!(
        "channel {name}: dim {}, {} operators, completeness defect {:.3e}\n",
        ch.dim(),
        ch.operators().len(),
        ch.completeness_defect()
    );
    for (k, op) in ch.operators().iter().enumerate() {
        out.push_str(&format!("E[{k}] =\n{}", format_matrix(op)));
    }
    let eigs = ch
        .choi()
        .mat()
        .hermitized()
        .eigenvalues_hermitian()
        .map_err(CliError::Lib)?;
    let formatted: Vec<String> = eigs.iter().map(|e| format!("{e:+.12e}")).collect();
    out.push_str(&format!("choi eigenvalues: [{}]\n", formatted.join(", ")));
    Ok(out)
}

fn angles_for(
    kind: CircuitKind,
    params: &HashMap<String, f64>,
    sd: &SpectralDensities,
) -> Result<CircuitAngles> {
    Ok(match kind {
        CircuitKind::Ad => CircuitAngles::amplitude_damping(need(params, "gamma", "ad")?),
        CircuitKind::Excite => CircuitAngles::excitation(need(params, "gamma", "excite")?),
        CircuitKind::Gad => {
            CircuitAngles::gad(need(params, "gamma", "gad")?, need(params, "p", "gad")?)
        }
        CircuitKind::Pd => CircuitAngles::pd(need(params, "lambda", "pd")?),
        CircuitKind::Bloch => CircuitAngles::bloch(
            need(params, "gamma", "bloch")?,
            need(params, "lambda", "bloch")?,
            need(params, "p", "bloch")?,
        ),
        CircuitKind::Gpd => CircuitAngles::gpd(need(params, "lambda", "gpd")?),
        CircuitKind::Quadrupolar => CircuitAngles::quadrupolar(&relaxation_params(params, sd)?),
    })
}

/// Gate listing of a named circuit in the debug-dump format.
pub fn circuit_dump(
    kind: CircuitKind,
    params: &HashMap<String, f64>,
    sd: &SpectralDensities,
) -> Result<String> {
    let angles = angles_for(kind, params, sd)?;
    let (circuit, env) = build_circuit(kind, &angles)?;
    let mut out = format!(
        "circuit {}: {} qubits ({} system + {} environment), {} gates\n",
        kind.name(),
        circuit.n_qubits(),
        env.system_qubits(),
        env.env_qubits(),
        circuit.gates().len()
    );
    out.push_str(&circuit.to_string());
    Ok(out)
}
