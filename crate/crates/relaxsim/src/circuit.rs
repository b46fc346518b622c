//! Gate-level simulator for the channel dilation circuits.
//!
//! Gates are RY rotations, X, Z and SWAP, each optionally conditioned on any
//! number of closed (•, fires on |1⟩) or open (∘, fires on |0⟩) controls.
//! Qubit 0 is the top wire of the diagrams and the outermost tensor factor.
//!
//! Every dilation couples the system wires (top) to environment ancillas
//! (bottom); evolving the joint register unitarily and tracing the ancillas
//! out realizes the corresponding Kraus channel. [`build_circuit`] returns
//! the transcribed gate list plus environment preparation for each circuit
//! in the catalog.

use std::fmt;

use num_complex::Complex64 as C64;

use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::qmatrix::{ComplexMatrix, DensityMatrix, PureState};
use crate::redfield::RelaxationParams;

/// Control polarity: closed fires on |1⟩, open fires on |0⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    Closed,
    Open,
}

impl Polarity {
    fn name(&self) -> &'static str {
        match self {
            Polarity::Closed => "closed",
            Polarity::Open => "open",
        }
    }
}

/// Base operation of a gate, before controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    /// RY(φ) = [[cos(φ/2), −sin(φ/2)], [sin(φ/2), cos(φ/2)]].
    Ry(f64),
    X,
    Z,
    Swap,
}

/// A gate on specific wires with optional multi-controls.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    kind: GateKind,
    targets: Vec<usize>,
    controls: Vec<(usize, Polarity)>,
}

impl Gate {
    pub fn ry(angle: f64, target: usize) -> Self {
        Self {
            kind: GateKind::Ry(angle),
            targets: vec![target],
            controls: Vec::new(),
        }
    }

    pub fn x(target: usize) -> Self {
        Self {
            kind: GateKind::X,
            targets: vec![target],
            controls: Vec::new(),
        }
    }

    pub fn z(target: usize) -> Self {
        Self {
            kind: GateKind::Z,
            targets: vec![target],
            controls: Vec::new(),
        }
    }

    pub fn swap(a: usize, b: usize) -> Self {
        Self {
            kind: GateKind::Swap,
            targets: vec![a, b],
            controls: Vec::new(),
        }
    }

    /// Adds a control wire; chainable.
    pub fn with_control(mut self, qubit: usize, polarity: Polarity) -> Self {
        self.controls.push((qubit, polarity));
        self
    }

    pub fn kind(&self) -> &GateKind {
        &self.kind
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn controls(&self) -> &[(usize, Polarity)] {
        &self.controls
    }

    fn validate(&self, n_qubits: usize) -> Result<()> {
        for &q in self
            .targets
            .iter()
            .chain(self.controls.iter().map(|(q, _)| q))
        {
            if q >= n_qubits {
                return Err(Error::QubitOutOfRange { index: q, n_qubits });
            }
        }
        let mut seen: Vec<usize> = self
            .targets
            .iter()
            .copied()
            .chain(self.controls.iter().map(|&(q, _)| q))
            .collect();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::OverlappingQubits);
        }
        match self.kind {
            GateKind::Swap => {
                if self.targets.len() != 2 {
                    return Err(Error::InvalidParameter(
                        "SWAP takes exactly two targets".into(),
                    ));
                }
            }
            _ => {
                if self.targets.len() != 1 {
                    return Err(Error::InvalidParameter(
                        "single-qubit gates take exactly one target".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GateKind::Ry(angle) => write!(f, "RY(theta={angle:.4})")?,
            GateKind::X => write!(f, "X")?,
            GateKind::Z => write!(f, "Z")?,
            GateKind::Swap => write!(f, "SWAP")?,
        }
        if self.targets.len() == 1 {
            write!(f, " target={}", self.targets[0])?;
        } else {
            write!(
                f,
                " targets=[{}]",
                self.targets
                    .iter()
                    .map(|t| t.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            )?;
        }
        let controls = self
            .controls
            .iter()
            .map(|(q, p)| format!("({},{})", q, p.name()))
            .collect::<Vec<_>>()
            .join(",");
        write!(f, " controls=[{controls}]")
    }
}

/// Ordered list of gates on a fixed register; first-listed gate acts first.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        assert!(n_qubits > 0, "a circuit needs at least one qubit");
        Self {
            n_qubits,
            gates: Vec::new(),
        }
    }

    pub fn push(&mut self, gate: Gate) -> Result<&mut Self> {
        gate.validate(self.n_qubits)?;
        self.gates.push(gate);
        Ok(self)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Full-register unitary: the product of the gate unitaries with the
    /// first-listed gate applied first (rightmost factor).
    pub fn unitary(&self) -> ComplexMatrix {
        let dim = 1usize << self.n_qubits;
        let mut u = ComplexMatrix::identity(dim);
        for gate in &self.gates {
            u = apply_gate_left(gate, self.n_qubits, &u);
        }
        u
    }
}

impl fmt::Display for Circuit {
    /// Plain-text debug dump, one gate per line, e.g.
    /// `RY(theta=1.5708) target=2 controls=[(0,closed),(6,open)]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for gate in &self.gates {
            writeln!(f, "{gate}")?;
        }
        Ok(())
    }
}

/// Per-basis-state action of a gate: at most two (output index, coefficient)
/// terms per input index. Shared by the unitary builder, the statevector
/// path and the dense embedding so all three agree exactly.
fn basis_action(gate: &Gate, n_qubits: usize, input: usize) -> ([(usize, C64); 2], usize) {
    let bit_mask = |q: usize| 1usize << (n_qubits - 1 - q);
    let controls_ok = gate.controls.iter().all(|&(q, pol)| {
        let set = input & bit_mask(q) != 0;
        match pol {
            Polarity::Closed => set,
            Polarity::Open => !set,
        }
    });
    let one = C64::new(1.0, 0.0);
    if !controls_ok {
        return ([(input, one), (0, C64::new(0.0, 0.0))], 1);
    }
    match gate.kind {
        GateKind::X => {
            let out = input ^ bit_mask(gate.targets[0]);
            ([(out, one), (0, C64::new(0.0, 0.0))], 1)
        }
        GateKind::Z => {
            let sign = if input & bit_mask(gate.targets[0]) != 0 {
                -1.0
            } else {
                1.0
            };
            ([(input, C64::new(sign, 0.0)), (0, C64::new(0.0, 0.0))], 1)
        }
        GateKind::Swap => {
            let (ma, mb) = (bit_mask(gate.targets[0]), bit_mask(gate.targets[1]));
            let (ba, bb) = (input & ma != 0, input & mb != 0);
            let out = if ba != bb { input ^ ma ^ mb } else { input };
            ([(out, one), (0, C64::new(0.0, 0.0))], 1)
        }
        GateKind::Ry(angle) => {
            let m = bit_mask(gate.targets[0]);
            let c = C64::new((angle / 2.0).cos(), 0.0);
            let s = (angle / 2.0).sin();
            if input & m == 0 {
                // RY|0> = cos|0> + sin|1>.
                ([(input, c), (input | m, C64::new(s, 0.0))], 2)
            } else {
                // RY|1> = -sin|0> + cos|1>.
                ([(input & !m, C64::new(-s, 0.0)), (input, c)], 2)
            }
        }
    }
}

/// Dense unitary of a single (possibly controlled) gate on the register.
pub fn gate_unitary(gate: &Gate, n_qubits: usize) -> Result<ComplexMatrix> {
    gate.validate(n_qubits)?;
    let dim = 1usize << n_qubits;
    let mut u = ComplexMatrix::zeros(dim);
    for col in 0..dim {
        let (terms, n) = basis_action(gate, n_qubits, col);
        for &(row, coeff) in &terms[..n] {
            u[(row, col)] += coeff;
        }
    }
    Ok(u)
}

/// G·M exploiting the two-terms-per-column structure of gate unitaries; the
/// result is identical to a dense product.
fn apply_gate_left(gate: &Gate, n_qubits: usize, m: &ComplexMatrix) -> ComplexMatrix {
    let dim = m.dim();
    let mut out = ComplexMatrix::zeros(dim);
    for k in 0..dim {
        let (terms, n) = basis_action(gate, n_qubits, k);
        for &(row, coeff) in &terms[..n] {
            for j in 0..dim {
                out[(row, j)] += coeff * m[(k, j)];
            }
        }
    }
    out
}

fn apply_gate_to_vector(gate: &Gate, n_qubits: usize, v: &[C64]) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); v.len()];
    for (k, &amp) in v.iter().enumerate() {
        if amp.re == 0.0 && amp.im == 0.0 {
            continue;
        }
        let (terms, n) = basis_action(gate, n_qubits, k);
        for &(row, coeff) in &terms[..n] {
            out[row] += coeff * amp;
        }
    }
    out
}

/// Environment preparation: one pure state per ancilla wire, stacked below
/// `system_qubits` system wires.
#[derive(Debug, Clone)]
pub struct EnvironmentSpec {
    system_qubits: usize,
    env_states: Vec<PureState>,
}

impl EnvironmentSpec {
    pub fn new(system_qubits: usize, env_states: Vec<PureState>) -> Result<Self> {
        if system_qubits == 0 {
            return Err(Error::InvalidParameter(
                "environment spec needs at least one system qubit".into(),
            ));
        }
        for s in &env_states {
            if s.dim() != 2 {
                return Err(Error::DimensionMismatch {
                    context: "environment qubit state",
                    expected: 2,
                    got: s.dim(),
                });
            }
        }
        Ok(Self {
            system_qubits,
            env_states,
        })
    }

    pub fn system_qubits(&self) -> usize {
        self.system_qubits
    }

    pub fn env_qubits(&self) -> usize {
        self.env_states.len()
    }

    pub fn total_qubits(&self) -> usize {
        self.system_qubits + self.env_states.len()
    }

    pub fn env_states(&self) -> &[PureState] {
        &self.env_states
    }

    /// Joint environment ket, outermost ancilla first.
    pub fn env_vector(&self) -> Vec<C64> {
        let mut v = vec![C64::new(1.0, 0.0)];
        for s in &self.env_states {
            let mut next = Vec::with_capacity(v.len() * 2);
            for a in &v {
                for b in s.amplitudes() {
                    next.push(a * b);
                }
            }
            v = next;
        }
        v
    }

    /// Joint environment density matrix.
    pub fn env_density(&self) -> DensityMatrix {
        let v = self.env_vector();
        let state = PureState::new(v).expect("product of normalized states");
        DensityMatrix::from_pure(&state)
    }
}

/// Unitary open-system evolution: U(ρ ⊗ ρ_env)U†, traced over the ancillas.
pub fn evolve_open(
    circuit: &Circuit,
    system_rho: &DensityMatrix,
    env: &EnvironmentSpec,
) -> Result<DensityMatrix> {
    if circuit.n_qubits() != env.total_qubits() {
        return Err(Error::DimensionMismatch {
            context: "circuit wires vs system+environment",
            expected: env.total_qubits(),
            got: circuit.n_qubits(),
        });
    }
    if system_rho.dim() != 1usize << env.system_qubits() {
        return Err(Error::DimensionMismatch {
            context: "system state vs system wires",
            expected: 1usize << env.system_qubits(),
            got: system_rho.dim(),
        });
    }
    let u = circuit.unitary();
    let full = system_rho.tensor(&env.env_density());
    let evolved = u.multiply(full.mat())?.multiply(&u.dagger())?;
    let dims = vec![2usize; circuit.n_qubits()];
    let keep: Vec<usize> = (0..env.system_qubits()).collect();
    let reduced = evolved.partial_trace(&dims, &keep)?;
    DensityMatrix::new(reduced.hermitized())
}

/// Kraus operators of the circuit dilation:
/// E_k = (I_sys ⊗ ⟨k|_env)·U·(I_sys ⊗ |env_init⟩).
///
/// Computed by propagating one statevector per system basis state through
/// the circuit (independent of the dense-unitary route used by
/// [`evolve_open`]). Operators with vanishing norm are dropped.
pub fn extract_kraus(circuit: &Circuit, env: &EnvironmentSpec) -> Result<KrausChannel> {
    if circuit.n_qubits() != env.total_qubits() {
        return Err(Error::DimensionMismatch {
            context: "circuit wires vs system+environment",
            expected: env.total_qubits(),
            got: circuit.n_qubits(),
        });
    }
    let d_sys = 1usize << env.system_qubits();
    let d_env = 1usize << env.env_qubits();
    let env_vec = env.env_vector();

    let mut columns = Vec::with_capacity(d_sys);
    for s in 0..d_sys {
        let mut v = vec![C64::new(0.0, 0.0); d_sys * d_env];
        v[s * d_env..(s + 1) * d_env].copy_from_slice(&env_vec);
        for gate in circuit.gates() {
            v = apply_gate_to_vector(gate, circuit.n_qubits(), &v);
        }
        columns.push(v);
    }

    let mut operators = Vec::new();
    for k in 0..d_env {
        let op = ComplexMatrix::from_fn(d_sys, |i, s| columns[s][i * d_env + k]);
        if op.frobenius_norm() > 1e-12 {
            operators.push(op);
        }
    }
    KrausChannel::new(operators)
}

/// The circuit catalog: one dilation per channel in the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CircuitKind {
    /// Pure decay |1⟩→|0⟩ (amplitude damping): 1 system + 1 ancilla.
    Ad,
    /// Pure excitation |0⟩→|1⟩: 1 system + 1 ancilla.
    Excite,
    /// Generalized amplitude damping: 1 system + 2 ancillas.
    Gad,
    /// Phase damping: 1 system + 1 ancilla.
    Pd,
    /// Single-qubit Bloch relaxation (PD then GAD): 1 system + 3 ancillas.
    Bloch,
    /// Global phase damping on two qubits: 2 system + 1 ancilla.
    Gpd,
    /// Full spin-3/2 relaxation: 2 system + 5 ancillas.
    Quadrupolar,
}

impl CircuitKind {
    pub fn name(&self) -> &'static str {
        match self {
            CircuitKind::Ad => "ad",
            CircuitKind::Excite => "excite",
            CircuitKind::Gad => "gad",
            CircuitKind::Pd => "pd",
            CircuitKind::Bloch => "bloch",
            CircuitKind::Gpd => "gpd",
            CircuitKind::Quadrupolar => "quadrupolar",
        }
    }
}

impl std::str::FromStr for CircuitKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ad" => Ok(CircuitKind::Ad),
            "excite" => Ok(CircuitKind::Excite),
            "gad" => Ok(CircuitKind::Gad),
            "pd" => Ok(CircuitKind::Pd),
            "bloch" => Ok(CircuitKind::Bloch),
            "gpd" => Ok(CircuitKind::Gpd),
            "quadrupolar" => Ok(CircuitKind::Quadrupolar),
            other => Err(Error::InvalidParameter(format!(
                "unknown circuit kind '{other}'"
            ))),
        }
    }
}

/// Rotation angles and environment populations for [`build_circuit`].
///
/// Only the fields a given [`CircuitKind`] uses need to be set; the
/// constructors fill them from channel parameters using the resolved
/// conventions α = 2·arcsin(√γ), β = 2·arccos(√γ), θ = 2·arccos(2λ−1).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CircuitAngles {
    /// Damping rotation of the A (or only) GAD block.
    pub alpha: Option<f64>,
    /// Excitation rotation of the A (or only) GAD block.
    pub beta: Option<f64>,
    /// Dephasing rotation (PD and GPD blocks).
    pub theta: Option<f64>,
    /// Damping rotation of the B GAD block.
    pub alpha_b: Option<f64>,
    /// Excitation rotation of the B GAD block.
    pub beta_b: Option<f64>,
    /// Equilibrium ground population of the A (or only) thermal ancilla.
    pub p: Option<f64>,
    /// Equilibrium ground population of the B thermal ancilla.
    pub p_b: Option<f64>,
}

impl CircuitAngles {
    pub fn amplitude_damping(gamma: f64) -> Self {
        Self {
            alpha: Some(2.0 * gamma.sqrt().asin()),
            ..Self::default()
        }
    }

    pub fn excitation(gamma: f64) -> Self {
        Self {
            beta: Some(2.0 * gamma.sqrt().acos()),
            ..Self::default()
        }
    }

    pub fn gad(gamma: f64, p: f64) -> Self {
        Self {
            alpha: Some(2.0 * gamma.sqrt().asin()),
            beta: Some(2.0 * gamma.sqrt().acos()),
            p: Some(p),
            ..Self::default()
        }
    }

    pub fn pd(lambda: f64) -> Self {
        Self {
            theta: Some(2.0 * (2.0 * lambda - 1.0).acos()),
            ..Self::default()
        }
    }

    pub fn bloch(gamma: f64, lambda: f64, p: f64) -> Self {
        Self {
            theta: Some(2.0 * (2.0 * lambda - 1.0).acos()),
            ..Self::gad(gamma, p)
        }
    }

    pub fn gpd(lambda: f64) -> Self {
        Self::pd(lambda)
    }

    /// Angles of the 7-qubit relaxation circuit from channel parameters:
    /// α_X = 2·arcsin(√γ_X), β_X = 2·arccos(√γ_X), θ = 2·arccos(2λ−1).
    pub fn quadrupolar(params: &RelaxationParams) -> Self {
        Self {
            alpha: Some(2.0 * params.gamma_a.sqrt().asin()),
            beta: Some(2.0 * params.gamma_a.sqrt().acos()),
            alpha_b: Some(2.0 * params.gamma_b.sqrt().asin()),
            beta_b: Some(2.0 * params.gamma_b.sqrt().acos()),
            theta: Some(2.0 * (2.0 * params.lambda - 1.0).acos()),
            p: Some(params.p_a),
            p_b: Some(params.p_b),
        }
    }

    fn require(&self, kind: &'static str, angle: &'static str) -> Result<f64> {
        let v = match angle {
            "alpha" => self.alpha,
            "beta" => self.beta,
            "theta" => self.theta,
            "alpha_b" => self.alpha_b,
            "beta_b" => self.beta_b,
            "p" => self.p,
            "p_b" => self.p_b,
            _ => unreachable!("unknown angle name"),
        };
        v.ok_or(Error::MissingAngle { kind, angle })
    }
}

/// The decay block on (system wire s, ancilla wire e): controlled RY onto
/// the ancilla, then an ancilla-controlled X back. When a thermal wire is
/// given, every gate is additionally open-controlled on it.
fn push_decay_block(
    circuit: &mut Circuit,
    s: usize,
    e: usize,
    thermal: Option<usize>,
    alpha: f64,
) -> Result<()> {
    let ctrl = |g: Gate| match thermal {
        Some(t) => g.with_control(t, Polarity::Open),
        None => g,
    };
    circuit.push(ctrl(Gate::ry(alpha, e).with_control(s, Polarity::Closed)))?;
    circuit.push(ctrl(Gate::x(s).with_control(e, Polarity::Closed)))?;
    Ok(())
}

/// The excitation block on (system wire s, ancilla wire e): X; RY(β) under
/// an open system control; open-controlled X back; controlled Z; SWAP. When
/// a thermal wire is given, every gate is additionally closed-controlled on
/// it.
fn push_excitation_block(
    circuit: &mut Circuit,
    s: usize,
    e: usize,
    thermal: Option<usize>,
    beta: f64,
) -> Result<()> {
    let ctrl = |g: Gate| match thermal {
        Some(t) => g.with_control(t, Polarity::Closed),
        None => g,
    };
    circuit.push(ctrl(Gate::x(e)))?;
    circuit.push(ctrl(Gate::ry(beta, e).with_control(s, Polarity::Open)))?;
    circuit.push(ctrl(Gate::x(s).with_control(e, Polarity::Open)))?;
    circuit.push(ctrl(Gate::z(s).with_control(e, Polarity::Closed)))?;
    circuit.push(ctrl(Gate::swap(s, e)))?;
    Ok(())
}

/// Full GAD block: decay conditioned on the thermal ancilla being |0⟩,
/// excitation conditioned on it being |1⟩.
fn push_gad_block(
    circuit: &mut Circuit,
    s: usize,
    e: usize,
    thermal: usize,
    alpha: f64,
    beta: f64,
) -> Result<()> {
    push_decay_block(circuit, s, e, Some(thermal), alpha)?;
    push_excitation_block(circuit, s, e, Some(thermal), beta)?;
    Ok(())
}

/// GPD block: RY(θ) on the ancilla fires when exactly one system wire is |1⟩.
fn push_gpd_block(circuit: &mut Circuit, s0: usize, s1: usize, e: usize, theta: f64) -> Result<()> {
    circuit.push(
        Gate::ry(theta, e)
            .with_control(s0, Polarity::Closed)
            .with_control(s1, Polarity::Open),
    )?;
    circuit.push(
        Gate::ry(theta, e)
            .with_control(s0, Polarity::Open)
            .with_control(s1, Polarity::Closed),
    )?;
    Ok(())
}

/// Builds the named dilation circuit and its environment preparation.
pub fn build_circuit(
    kind: CircuitKind,
    angles: &CircuitAngles,
) -> Result<(Circuit, EnvironmentSpec)> {
    let zero = PureState::basis(2, 0);
    match kind {
        CircuitKind::Ad => {
            let alpha = angles.require("ad", "alpha")?;
            let mut c = Circuit::new(2);
            push_decay_block(&mut c, 0, 1, None, alpha)?;
            Ok((c, EnvironmentSpec::new(1, vec![zero])?))
        }
        CircuitKind::Excite => {
            let beta = angles.require("excite", "beta")?;
            let mut c = Circuit::new(2);
            push_excitation_block(&mut c, 0, 1, None, beta)?;
            Ok((c, EnvironmentSpec::new(1, vec![zero])?))
        }
        CircuitKind::Gad => {
            let alpha = angles.require("gad", "alpha")?;
            let beta = angles.require("gad", "beta")?;
            let p = angles.require("gad", "p")?;
            let mut c = Circuit::new(3);
            push_gad_block(&mut c, 0, 1, 2, alpha, beta)?;
            let env = EnvironmentSpec::new(1, vec![zero, PureState::equilibrium(p)?])?;
            Ok((c, env))
        }
        CircuitKind::Pd => {
            let theta = angles.require("pd", "theta")?;
            let mut c = Circuit::new(2);
            c.push(Gate::ry(theta, 1).with_control(0, Polarity::Closed))?;
            Ok((c, EnvironmentSpec::new(1, vec![zero])?))
        }
        CircuitKind::Bloch => {
            let theta = angles.require("bloch", "theta")?;
            let alpha = angles.require("bloch", "alpha")?;
            let beta = angles.require("bloch", "beta")?;
            let p = angles.require("bloch", "p")?;
            let mut c = Circuit::new(4);
            c.push(Gate::ry(theta, 1).with_control(0, Polarity::Closed))?;
            push_gad_block(&mut c, 0, 2, 3, alpha, beta)?;
            let env =
                EnvironmentSpec::new(1, vec![zero.clone(), zero, PureState::equilibrium(p)?])?;
            Ok((c, env))
        }
        CircuitKind::Gpd => {
            let theta = angles.require("gpd", "theta")?;
            let mut c = Circuit::new(3);
            push_gpd_block(&mut c, 0, 1, 2, theta)?;
            Ok((c, EnvironmentSpec::new(2, vec![zero])?))
        }
        CircuitKind::Quadrupolar => {
            let theta = angles.require("quadrupolar", "theta")?;
            let alpha_a = angles.require("quadrupolar", "alpha")?;
            let beta_a = angles.require("quadrupolar", "beta")?;
            let alpha_b = angles.require("quadrupolar", "alpha_b")?;
            let beta_b = angles.require("quadrupolar", "beta_b")?;
            let p_a = angles.require("quadrupolar", "p")?;
            let p_b = angles.require("quadrupolar", "p_b")?;
            let mut c = Circuit::new(7);
            push_gpd_block(&mut c, 0, 1, 2, theta)?;
            push_gad_block(&mut c, 0, 3, 5, alpha_a, beta_a)?;
            push_gad_block(&mut c, 1, 4, 6, alpha_b, beta_b)?;
            let env = EnvironmentSpec::new(
                2,
                vec![
                    zero.clone(),
                    zero.clone(),
                    zero,
                    PureState::equilibrium(p_a)?,
                    PureState::equilibrium(p_b)?,
                ],
            )?;
            Ok((c, env))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{gad, gpd, pd, KrausChannel};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn ry_pi_is_quarter_turn_matrix() {
        let u = gate_unitary(&Gate::ry(std::f64::consts::PI, 0), 1).unwrap();
        let want = ComplexMatrix::from_real_rows(&[&[0.0, -1.0], &[1.0, 0.0]]);
        assert!(u.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn cnot_embedding_is_block_diagonal() {
        let u = gate_unitary(&Gate::x(1).with_control(0, Polarity::Closed), 2).unwrap();
        let want = ComplexMatrix::from_real_rows(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, 1.0, 0.0],
        ]);
        assert_eq!(u, want);
    }

    #[test]
    fn open_control_fires_on_zero() {
        let u = gate_unitary(&Gate::x(0).with_control(1, Polarity::Open), 2).unwrap();
        // |00> -> |10>, |01> -> |01>.
        assert_eq!(u[(2, 0)], c(1.0, 0.0));
        assert_eq!(u[(1, 1)], c(1.0, 0.0));
        assert_eq!(u[(0, 0)], c(0.0, 0.0));
    }

    #[test]
    fn out_of_range_qubit_is_rejected() {
        let mut circuit = Circuit::new(2);
        assert!(matches!(
            circuit.push(Gate::x(2)),
            Err(Error::QubitOutOfRange { .. })
        ));
        assert!(matches!(
            circuit.push(Gate::x(0).with_control(0, Polarity::Closed)),
            Err(Error::OverlappingQubits)
        ));
    }

    #[test]
    fn empty_circuit_unitary_is_identity() {
        let circuit = Circuit::new(3);
        assert_eq!(circuit.unitary(), ComplexMatrix::identity(8));
    }

    #[test]
    fn double_x_is_identity() {
        let mut circuit = Circuit::new(1);
        circuit.push(Gate::x(0)).unwrap();
        circuit.push(Gate::x(0)).unwrap();
        assert_eq!(circuit.unitary(), ComplexMatrix::identity(2));
    }

    #[test]
    fn circuit_unitary_matches_dense_gate_product() {
        let mut circuit = Circuit::new(3);
        circuit
            .push(Gate::ry(0.7, 2).with_control(0, Polarity::Closed))
            .unwrap();
        circuit
            .push(Gate::x(0).with_control(2, Polarity::Open))
            .unwrap();
        circuit.push(Gate::swap(0, 1)).unwrap();
        circuit
            .push(Gate::z(1).with_control(2, Polarity::Closed))
            .unwrap();

        let mut dense = ComplexMatrix::identity(8);
        for gate in circuit.gates() {
            dense = gate_unitary(gate, 3).unwrap().multiply(&dense).unwrap();
        }
        assert_eq!(circuit.unitary(), dense);
    }

    #[test]
    fn ad_circuit_extracts_amplitude_damping_pair() {
        let gamma = 0.36;
        let (circuit, env) =
            build_circuit(CircuitKind::Ad, &CircuitAngles::amplitude_damping(gamma)).unwrap();
        let ch = extract_kraus(&circuit, &env).unwrap();
        let e0 = ComplexMatrix::diagonal(&[c(1.0, 0.0), c((1.0 - gamma).sqrt(), 0.0)]);
        let mut e1 = ComplexMatrix::zeros(2);
        e1[(0, 1)] = c(gamma.sqrt(), 0.0);
        assert_eq!(ch.operators().len(), 2);
        assert!(ch.operators()[0].max_abs_diff(&e0) < 1e-15);
        assert!(ch.operators()[1].max_abs_diff(&e1) < 1e-15);
    }

    #[test]
    fn identity_circuit_kraus_is_identity_after_dropping_zeros() {
        let circuit = Circuit::new(2);
        let env = EnvironmentSpec::new(1, vec![PureState::basis(2, 0)]).unwrap();
        let ch = extract_kraus(&circuit, &env).unwrap();
        assert_eq!(ch.operators().len(), 1);
        assert!(ch.operators()[0].max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);
        assert!(ch.completeness_defect() < 1e-15);
    }

    #[test]
    fn evolve_open_identity_circuit_preserves_state() {
        let circuit = Circuit::new(2);
        let env = EnvironmentSpec::new(1, vec![PureState::basis(2, 0)]).unwrap();
        let rho = DensityMatrix::maximally_mixed(2);
        let out = evolve_open(&circuit, &rho, &env).unwrap();
        assert!(out.mat().max_abs_diff(rho.mat()) < 1e-15);
    }

    #[test]
    fn pd_circuit_scales_plus_state_coherence() {
        let lambda = 0.73;
        let (circuit, env) = build_circuit(CircuitKind::Pd, &CircuitAngles::pd(lambda)).unwrap();
        let plus = PureState::new(vec![
            c(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            c(std::f64::consts::FRAC_1_SQRT_2, 0.0),
        ])
        .unwrap();
        let out = evolve_open(&circuit, &DensityMatrix::from_pure(&plus), &env).unwrap();
        assert!((out.element(0, 1).re - 0.5 * (2.0 * lambda - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn excite_circuit_matches_normalized_subprocess() {
        // Target: {E3, E4}/sqrt(1-P), i.e. gad(gamma, 0).
        for &gamma in &[0.05, 0.3, 0.62, 0.97] {
            let (circuit, env) =
                build_circuit(CircuitKind::Excite, &CircuitAngles::excitation(gamma)).unwrap();
            let got = extract_kraus(&circuit, &env).unwrap().choi();
            let want = gad(gamma, 0.0).unwrap().choi();
            let d = got.distance(&want).unwrap();
            assert!(d < 1e-12, "gamma = {gamma}: choi distance {d}");
        }
    }

    #[test]
    fn gad_circuit_matches_channel() {
        for &(gamma, p) in &[(0.3, 0.5), (0.7, 0.2), (0.15, 0.9), (0.0, 0.4), (1.0, 0.6)] {
            let (circuit, env) =
                build_circuit(CircuitKind::Gad, &CircuitAngles::gad(gamma, p)).unwrap();
            let got = extract_kraus(&circuit, &env).unwrap().choi();
            let want = gad(gamma, p).unwrap().choi();
            let d = got.distance(&want).unwrap();
            assert!(d < 1e-12, "gamma = {gamma}, p = {p}: choi distance {d}");
        }
    }

    #[test]
    fn gpd_circuit_matches_channel() {
        for &lambda in &[0.5, 0.55, 0.75, 0.99, 1.0] {
            let (circuit, env) =
                build_circuit(CircuitKind::Gpd, &CircuitAngles::gpd(lambda)).unwrap();
            let got = extract_kraus(&circuit, &env).unwrap().choi();
            let want = gpd(lambda).unwrap().choi();
            let d = got.distance(&want).unwrap();
            assert!(d < 1e-12, "lambda = {lambda}: choi distance {d}");
        }
    }

    #[test]
    fn bloch_circuit_matches_pd_gad_composition() {
        for &(gamma, lambda, p) in &[(0.2, 0.9, 0.5), (0.6, 0.7, 0.8), (0.45, 0.55, 0.1)] {
            let (circuit, env) =
                build_circuit(CircuitKind::Bloch, &CircuitAngles::bloch(gamma, lambda, p)).unwrap();
            let got = extract_kraus(&circuit, &env).unwrap().choi();
            let want = KrausChannel::compose(&pd(lambda).unwrap(), &gad(gamma, p).unwrap())
                .unwrap()
                .choi();
            let d = got.distance(&want).unwrap();
            assert!(d < 1e-12, "({gamma},{lambda},{p}): choi distance {d}");
        }
    }

    #[test]
    fn quadrupolar_circuit_is_identity_at_time_zero() {
        let params = RelaxationParams::new(0.0, 0.0, 1.0, 0.5, 0.5, 0.0).unwrap();
        let (circuit, env) = build_circuit(
            CircuitKind::Quadrupolar,
            &CircuitAngles::quadrupolar(&params),
        )
        .unwrap();
        assert_eq!(circuit.n_qubits(), 7);
        assert_eq!(env.system_qubits(), 2);
        assert_eq!(env.env_qubits(), 5);
        let ch = extract_kraus(&circuit, &env).unwrap();
        let d = ch
            .choi()
            .distance(&KrausChannel::identity(4).choi())
            .unwrap();
        assert!(d < 1e-12, "choi distance {d}");
    }

    #[test]
    fn evolve_open_agrees_with_extracted_kraus() {
        let params = RelaxationParams::new(0.35, 0.2, 0.8, 0.5, 0.5, 0.0).unwrap();
        let (circuit, env) = build_circuit(
            CircuitKind::Quadrupolar,
            &CircuitAngles::quadrupolar(&params),
        )
        .unwrap();
        let rho = crate::redfield::make_state(crate::redfield::StateKind::Uniform, 1.0).unwrap();
        let direct = evolve_open(&circuit, &rho, &env).unwrap();
        let via_kraus = extract_kraus(&circuit, &env).unwrap().apply(&rho).unwrap();
        assert!(direct.mat().max_abs_diff(via_kraus.mat()) < 1e-12);
    }

    #[test]
    fn build_circuit_reports_missing_angles() {
        let err = build_circuit(CircuitKind::Gad, &CircuitAngles::amplitude_damping(0.3));
        assert!(matches!(
            err,
            Err(Error::MissingAngle { angle: "beta", .. })
        ));
    }

    #[test]
    fn debug_dump_format_is_stable() {
        let gate = Gate::ry(std::f64::consts::FRAC_PI_2, 2)
            .with_control(0, Polarity::Closed)
            .with_control(6, Polarity::Open);
        assert_eq!(
            gate.to_string(),
            "RY(theta=1.5708) target=2 controls=[(0,closed),(6,open)]"
        );
        assert_eq!(
            Gate::swap(0, 3).to_string(),
            "SWAP targets=[0,3] controls=[]"
        );
    }
}
