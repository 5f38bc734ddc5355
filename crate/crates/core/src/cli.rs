//! Command-line front end.
//!
//! Exit codes: 0 success, 1 parse/usage/IO error, 2 infeasible or
//! uncompilable request (including invalid spin systems), 3 numerical failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::circuit::{builtin, run_ideal, run_pulse, Circuit, ExecutionTrace, PulseRun};
use crate::error::Error;
use crate::format::{format_sig, round_sig};
use crate::gates::BellState;
use crate::linalg::{Complex, ComplexMatrix};
use crate::pulse::{transition_spectrum, PulseCompiler, SystemConfig, TransitionLine};
use crate::register::{QuantumState, StateLabel};

#[derive(Debug, Parser)]
#[command(name = "spinqc", version, about = "Two-spin NMR quantum computing simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a circuit with exact gates or compiled pulses.
    Run(RunArgs),
    /// Print the four one-spin transition lines of a system.
    Spectrum(SpectrumArgs),
}

#[derive(Debug, clap::Args)]
struct RunArgs {
    /// Circuit file.
    #[arg(long, conflicts_with = "builtin", required_unless_present = "builtin")]
    circuit: Option<PathBuf>,
    /// Built-in circuit: ghz3, bell-readout, not2, qft-1 .. qft-6.
    #[arg(long)]
    builtin: Option<String>,
    #[arg(long, value_enum, default_value_t = Mode::Ideal)]
    mode: Mode,
    /// System configuration (key=value file); required in pulse mode.
    #[arg(long)]
    system: Option<PathBuf>,
    /// Input state: signs (`+-+`), bits (`010`), `ghz` or `bell:<phi+|phi-|psi+|psi->`.
    /// Defaults to all spins in |+>.
    #[arg(long)]
    input: Option<String>,
    /// Comma-separated documents to emit.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "state")]
    emit: Vec<Emit>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
struct SpectrumArgs {
    /// System configuration (key=value file).
    #[arg(long)]
    system: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Ideal,
    Pulse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    State,
    Trace,
    Unitary,
    Schedule,
    Spectrum,
    Fidelity,
}

impl Emit {
    fn name(self) -> &'static str {
        match self {
            Emit::State => "state",
            Emit::Trace => "trace",
            Emit::Unitary => "unitary",
            Emit::Schedule => "schedule",
            Emit::Spectrum => "spectrum",
            Emit::Fidelity => "fidelity",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. }
            | Error::InvalidInput(_)
            | Error::DimensionMismatch { .. }
            | Error::NotSquare { .. } => 1,
            Error::InvalidSystem(_) | Error::Feasibility { .. } | Error::Compilation { .. } => 2,
            Error::NotHermitian { .. }
            | Error::NonFinite(_)
            | Error::NotNormalized { .. }
            | Error::Integration(_) => 3,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let result = match cli.command {
        Command::Run(args) => cmd_run(&args).and_then(|doc| write_output(&doc, args.out.as_ref())),
        Command::Spectrum(args) => {
            cmd_spectrum(&args).and_then(|doc| write_output(&doc, args.out.as_ref()))
        }
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

fn write_output(doc: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, doc)
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(doc.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::usage(format!("cannot write output: {e}")))
        }
    }
}

fn read_file(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))
}

fn load_system(path: &PathBuf) -> Result<SystemConfig, CliError> {
    let text = read_file(path)?;
    SystemConfig::parse(&text).map_err(|e| {
        let mut err = CliError::from(e);
        err.message = format!("{}: {}", path.display(), err.message);
        err
    })
}

/// Parses the `--input` shorthand for an `n`-spin register.
fn parse_input(spec: Option<&str>, n: usize) -> Result<QuantumState, CliError> {
    let Some(spec) = spec.map(str::trim) else {
        return Ok(QuantumState::ground(n)?);
    };
    let lower = spec.to_ascii_lowercase();
    if lower == "ghz" {
        if n == 1 {
            return Err(CliError::usage("`ghz` input needs at least 2 spins"));
        }
        let h = Complex::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let mut amps = vec![Complex::new(0.0, 0.0); 1 << n];
        amps[0] = h;
        amps[(1 << n) - 1] = h;
        return Ok(QuantumState::from_amplitudes(n, amps)?);
    }
    if let Some(which) = lower.strip_prefix("bell:") {
        if n != 2 {
            return Err(CliError::usage(format!("Bell inputs need 2 spins, the circuit has {n}")));
        }
        return Ok(BellState::parse(which)?.state());
    }
    let label = if spec.chars().all(|c| c == '0' || c == '1') {
        StateLabel::from_bits(spec)?
    } else {
        StateLabel::from_signs(spec)?
    };
    if label.n() != n {
        return Err(CliError::usage(format!(
            "input `{spec}` has {} spins, the circuit has {n}",
            label.n()
        )));
    }
    Ok(QuantumState::basis_state(n, &label)?)
}

/// One emitted document in both output formats.
struct Section {
    name: &'static str,
    text: String,
    json: Value,
}

fn num(x: f64) -> Value {
    json!(round_sig(x))
}

fn state_section(name: &'static str, state: &QuantumState) -> Section {
    Section {
        name,
        text: state.render_text(),
        json: state_json(state),
    }
}

fn state_json(state: &QuantumState) -> Value {
    Value::Array(
        state
            .terms()
            .into_iter()
            .map(|(label, a)| {
                json!({
                    "signs": label.sign_string(),
                    "bits": label.bit_string(),
                    "index": label.index(),
                    "re": num(a.re),
                    "im": num(a.im),
                })
            })
            .collect(),
    )
}

fn trace_section(circuit: &Circuit, trace: &ExecutionTrace) -> Section {
    let mut text = String::from("step 0 input\n");
    text.push_str(&trace.initial.render_text());
    let mut steps = vec![json!({"step": 0, "gate": "input", "state": state_json(&trace.initial)})];
    for (k, (gate, state)) in circuit.steps().iter().zip(&trace.states).enumerate() {
        let _ = writeln!(text, "step {} {}", k + 1, gate.name());
        text.push_str(&state.render_text());
        steps.push(json!({"step": k + 1, "gate": gate.name(), "state": state_json(state)}));
    }
    Section {
        name: "trace",
        text,
        json: Value::Array(steps),
    }
}

fn unitary_section(u: &ComplexMatrix) -> Section {
    let mut text = String::new();
    let mut entries = Vec::with_capacity(u.rows() * u.cols());
    for i in 0..u.rows() {
        for j in 0..u.cols() {
            let z = u.get(i, j);
            let _ = writeln!(text, "{i} {j} {} {}", format_sig(z.re), format_sig(z.im));
            entries.push(json!({"row": i, "col": j, "re": num(z.re), "im": num(z.im)}));
        }
    }
    Section {
        name: "unitary",
        text,
        json: Value::Array(entries),
    }
}

fn schedule_section(run: &PulseRun) -> Section {
    let mut text = String::new();
    let mut items = Vec::new();
    for item in &run.schedule {
        let Some(p) = item.pulse else { continue };
        let purpose = item.gate.name();
        let _ = writeln!(
            text,
            "carrier={} omega_p={} tau={} phase={} purpose={}",
            format_sig(p.carrier),
            format_sig(p.amplitude),
            format_sig(p.duration),
            format_sig(p.phase),
            purpose
        );
        items.push(json!({
            "carrier": num(p.carrier),
            "omega_p": num(p.amplitude),
            "tau": num(p.duration),
            "phase": num(p.phase),
            "purpose": purpose,
        }));
    }
    Section {
        name: "schedule",
        text,
        json: Value::Array(items),
    }
}

fn spectrum_section(lines: &[TransitionLine]) -> Section {
    let mut text = String::new();
    let mut items = Vec::new();
    for line in lines {
        let _ = writeln!(text, "{line}");
        items.push(json!({
            "freq": num(line.frequency),
            "from": line.from.sign_string(),
            "to": line.to.sign_string(),
            "flipped": line.flipped_spin,
            "spectator": line.spectator.symbol().to_string(),
        }));
    }
    Section {
        name: "spectrum",
        text,
        json: Value::Array(items),
    }
}

fn fidelity_section(run: &PulseRun) -> Section {
    let mut text = String::new();
    let mut gates = Vec::new();
    for (item, report) in run.schedule.iter().zip(&run.gates) {
        let name = item.gate.name();
        let _ = writeln!(
            text,
            "gate={} fidelity={} adjusted={}",
            name,
            format_sig(report.fidelity),
            format_sig(report.adjusted_fidelity)
        );
        gates.push(json!({
            "gate": name,
            "fidelity": num(report.fidelity),
            "adjusted": num(report.adjusted_fidelity),
        }));
    }
    let _ = writeln!(
        text,
        "circuit fidelity={} adjusted={} state={}",
        format_sig(run.circuit.fidelity),
        format_sig(run.circuit.adjusted_fidelity),
        format_sig(run.state_fidelity)
    );
    Section {
        name: "fidelity",
        text,
        json: json!({
            "gates": gates,
            "circuit": {
                "fidelity": num(run.circuit.fidelity),
                "adjusted": num(run.circuit.adjusted_fidelity),
                "state": num(run.state_fidelity),
            },
        }),
    }
}

fn render(sections: Vec<Section>, format: Format) -> String {
    match format {
        Format::Text => {
            if sections.len() == 1 {
                return sections.into_iter().next().map(|s| s.text).unwrap_or_default();
            }
            let mut out = String::new();
            for s in sections {
                let _ = writeln!(out, "# {}", s.name);
                out.push_str(&s.text);
            }
            out
        }
        Format::Json => {
            let mut map = Map::new();
            for s in sections {
                map.insert(s.name.to_string(), s.json);
            }
            let mut out = serde_json::to_string_pretty(&Value::Object(map)).expect("json values serialize");
            out.push('\n');
            out
        }
    }
}

fn cmd_run(args: &RunArgs) -> Result<String, CliError> {
    let circuit = match (&args.circuit, &args.builtin) {
        (Some(path), _) => {
            let text = read_file(path)?;
            Circuit::parse(&text).map_err(|e| {
                let mut err = CliError::from(e);
                err.message = format!("{}: {}", path.display(), err.message);
                err
            })?
        }
        (None, Some(name)) => builtin(name)?,
        (None, None) => return Err(CliError::usage("give --circuit or --builtin")),
    };
    let mut emits: Vec<Emit> = Vec::new();
    for e in &args.emit {
        if !emits.contains(e) {
            emits.push(*e);
        }
    }
    let system = args.system.as_ref().map(load_system).transpose()?;
    if args.mode == Mode::Pulse && system.is_none() {
        return Err(CliError::usage("pulse mode needs --system"));
    }
    for e in &emits {
        match e {
            Emit::Schedule | Emit::Fidelity if args.mode == Mode::Ideal => {
                return Err(CliError::usage(format!("--emit {} needs --mode pulse", e.name())));
            }
            Emit::Spectrum if system.is_none() => {
                return Err(CliError::usage("--emit spectrum needs --system"));
            }
            _ => {}
        }
    }
    let input = parse_input(args.input.as_deref(), circuit.n())?;
    let (trace, unitary, run) = match args.mode {
        Mode::Ideal => {
            let trace = run_ideal(&circuit, &input)?;
            let unitary = if emits.contains(&Emit::Unitary) {
                Some(circuit.unitary()?)
            } else {
                None
            };
            (trace, unitary, None)
        }
        Mode::Pulse => {
            let cfg = system.expect("checked above");
            let compiler = PulseCompiler::new(cfg.system, cfg.bandwidth);
            let run = run_pulse(&circuit, &compiler, &input)?;
            (run.trace.clone(), Some(run.propagator.clone()), Some(run))
        }
    };
    let mut sections = Vec::with_capacity(emits.len());
    for e in emits {
        sections.push(match e {
            Emit::State => state_section("state", trace.final_state()),
            Emit::Trace => trace_section(&circuit, &trace),
            Emit::Unitary => unitary_section(unitary.as_ref().expect("computed for this emit")),
            Emit::Schedule => schedule_section(run.as_ref().expect("pulse mode")),
            Emit::Fidelity => fidelity_section(run.as_ref().expect("pulse mode")),
            Emit::Spectrum => spectrum_section(&transition_spectrum(&system.expect("checked").system)),
        });
    }
    Ok(render(sections, args.format))
}

fn cmd_spectrum(args: &SpectrumArgs) -> Result<String, CliError> {
    let cfg = load_system(&args.system)?;
    Ok(render(
        vec![spectrum_section(&transition_spectrum(&cfg.system))],
        args.format,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn input_specs() {
        let s = parse_input(Some("+-"), 2).unwrap();
        assert_eq!(s.probability(2), 1.0);
        let b = parse_input(Some("01"), 2).unwrap();
        assert_eq!(b, s);
        let g = parse_input(Some("GHZ"), 3).unwrap();
        assert!((g.probability(7) - 0.5).abs() < 1e-15);
        assert_eq!(parse_input(Some("bell:psi-"), 2).unwrap(), BellState::PsiMinus.state());
        assert_eq!(parse_input(None, 3).unwrap(), QuantumState::ground(3).unwrap());
        for (bad, n) in [("+-", 3), ("bell:phi+", 3), ("ghz", 1), ("xy", 2), ("bell:chi", 2)] {
            assert_eq!(parse_input(Some(bad), n).unwrap_err().code, 1, "{bad}");
        }
    }

    #[test]
    fn exit_codes() {
        let e = |err: Error| CliError::from(err).code;
        assert_eq!(e(Error::Parse { line: 1, message: String::new() }), 1);
        assert_eq!(e(Error::InvalidSystem(String::new())), 2);
        assert_eq!(
            e(Error::Compilation {
                gate: String::new(),
                reason: String::new()
            }),
            2
        );
        assert_eq!(e(Error::Integration(String::new())), 3);
    }

    #[test]
    fn single_section_has_no_header() {
        let s = Section {
            name: "state",
            text: "x\n".into(),
            json: Value::Null,
        };
        assert_eq!(render(vec![s], Format::Text), "x\n");
    }
}
