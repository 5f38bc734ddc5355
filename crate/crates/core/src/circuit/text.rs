//! Line-oriented circuit files.
//!
//! ```text
//! # GHZ on three spins
//! qubits 3
//! ry 3 -pi/4
//! cnot 2 3 minus
//! cnot 1 2 minus
//! ```
//!
//! Directives are case-insensitive; `#` starts a comment. Angles are decimal
//! radians, `pi`, `pi/<k>` or `-pi/<k>`.

use std::f64::consts::PI;

use super::Circuit;
use crate::error::{Error, Result};
use crate::gates::{Axis, ControlCondition, Gate};

/// Parses `1.5`, `pi`, `-pi`, `pi/4` or `-pi/4`.
pub fn parse_angle(token: &str) -> Result<f64> {
    let t = token.trim().to_ascii_lowercase();
    let (sign, body) = match t.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, t.strip_prefix('+').unwrap_or(&t)),
    };
    let value = if body == "pi" {
        PI
    } else if let Some(k) = body.strip_prefix("pi/") {
        let k: f64 = k
            .parse()
            .map_err(|_| Error::invalid(format!("bad angle divisor in `{token}`")))?;
        if !(k.is_finite() && k != 0.0) {
            return Err(Error::invalid(format!("bad angle divisor in `{token}`")));
        }
        PI / k
    } else {
        body.parse::<f64>()
            .map_err(|_| Error::invalid(format!("bad angle `{token}`")))?
    };
    if !value.is_finite() {
        return Err(Error::invalid(format!("angle `{token}` is not finite")));
    }
    Ok(sign * value)
}

fn parse_spin(token: &str) -> Result<usize> {
    token
        .parse()
        .map_err(|_| Error::invalid(format!("bad spin index `{token}`")))
}

fn parse_condition(token: &str) -> Result<ControlCondition> {
    match token {
        "plus" | "+" => Ok(ControlCondition::Plus),
        "minus" | "-" => Ok(ControlCondition::Minus),
        _ => Err(Error::invalid(format!("control condition must be plus or minus, got `{token}`"))),
    }
}

fn parse_step(words: &[&str]) -> Result<Gate> {
    let arity = |k: usize| {
        if words.len() == k + 1 {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "`{}` takes {k} argument(s), got {}",
                words[0],
                words.len() - 1
            )))
        }
    };
    let gate = match words[0] {
        "rx" | "ry" | "rz" => {
            arity(2)?;
            let axis = match words[0] {
                "rx" => Axis::X,
                "ry" => Axis::Y,
                _ => Axis::Z,
            };
            Gate::Rotation {
                axis,
                spin: parse_spin(words[1])?,
                angle: parse_angle(words[2])?,
            }
        }
        "cnot" => {
            arity(3)?;
            Gate::cnot(parse_spin(words[1])?, parse_spin(words[2])?, parse_condition(words[3])?)
        }
        "not" => {
            arity(0)?;
            Gate::NotAll
        }
        "qft" => {
            arity(0)?;
            Gate::Qft
        }
        "bellread" => {
            arity(0)?;
            Gate::BellReadout
        }
        other => return Err(Error::invalid(format!("unknown directive `{other}`"))),
    };
    Ok(gate)
}

impl Circuit {
    /// Parses a circuit file. Every failure is an `Error::Parse` carrying
    /// the 1-based line number (0 when the problem is the whole file).
    pub fn parse(text: &str) -> Result<Circuit> {
        let mut n: Option<(usize, usize)> = None;
        let mut steps: Vec<(usize, Gate)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let at = |e: Error| Error::Parse {
                line: line_no,
                message: match e {
                    Error::InvalidInput(m) => m,
                    other => other.to_string(),
                },
            };
            let line = raw.split('#').next().unwrap_or("").trim().to_ascii_lowercase();
            let words: Vec<&str> = line.split_whitespace().collect();
            if words.is_empty() {
                continue;
            }
            if words[0] == "qubits" {
                if let Some((_, first)) = n {
                    return Err(at(Error::invalid(format!(
                        "`qubits` repeated (first given on line {first})"
                    ))));
                }
                if words.len() != 2 {
                    return Err(at(Error::invalid("`qubits` takes 1 argument")));
                }
                let count = words[1]
                    .parse()
                    .map_err(|_| at(Error::invalid(format!("bad spin count `{}`", words[1]))))?;
                n = Some((count, line_no));
                continue;
            }
            if n.is_none() {
                return Err(at(Error::invalid("`qubits <n>` must come before the first gate")));
            }
            steps.push((line_no, parse_step(&words).map_err(at)?));
        }
        let (n, n_line) = n.ok_or_else(|| Error::Parse {
            line: 0,
            message: "missing `qubits <n>` line".into(),
        })?;
        let whole = |e: Error, line: usize| Error::Parse {
            line,
            message: match e {
                Error::InvalidInput(m) => m,
                other => other.to_string(),
            },
        };
        for (line, gate) in &steps {
            gate.validate(n).map_err(|e| whole(e, *line))?;
        }
        Circuit::new(n, steps.into_iter().map(|(_, g)| g).collect()).map_err(|e| whole(e, n_line))
    }

    /// Renders the circuit in the format `parse` reads. The global phase
    /// has no directive and is dropped.
    pub fn to_text(&self) -> String {
        let mut out = format!("qubits {}\n", self.n());
        for gate in self.steps() {
            out.push_str(&gate.to_string());
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::builtin;
    use proptest::prelude::*;

    #[test]
    fn angles() {
        let cases = [
            ("0.5", 0.5),
            ("pi", PI),
            ("-pi", -PI),
            ("pi/4", PI / 4.0),
            ("-PI/4", -PI / 4.0),
            ("pi/2.5", PI / 2.5),
            ("-1e-3", -1e-3),
        ];
        for (text, value) in cases {
            assert_eq!(parse_angle(text).unwrap(), value, "{text}");
        }
        for bad in ["pi/0", "tau", "pi/", "2pi", "nan", "inf", ""] {
            assert!(parse_angle(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn parses_ghz_file() {
        let text = "# GHZ\nQUBITS 3\n\nry 3 -pi/4   # first\nCNOT 2 3 Minus\ncnot 1 2 minus\n";
        assert_eq!(Circuit::parse(text).unwrap(), builtin("ghz3").unwrap());
    }

    #[test]
    fn parses_composite_gates() {
        let c = Circuit::parse("qubits 2\nnot\nbellread\nqft\nrz 2 0.25\ncnot 2 1 plus\n").unwrap();
        assert_eq!(
            c.steps(),
            &[
                Gate::NotAll,
                Gate::BellReadout,
                Gate::Qft,
                Gate::rz(2, 0.25),
                Gate::cnot(2, 1, ControlCondition::Plus)
            ]
        );
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("qubits 2\nrx 1 pi\nswap 1 2\n", 3),
            ("qubits 2\nrx 1\n", 2),
            ("qubits 2\ncnot 1 1 minus\n", 2),
            ("qubits 2\nrx 3 pi\n", 2),
            ("qubits 2\ncnot 1 2 maybe\n", 2),
            ("qubits x\n", 1),
            ("qubits 2\nqubits 2\n", 2),
            ("rx 1 pi\nqubits 2\n", 1),
            ("qubits 9\n", 1),
            ("rx 1 pi\n", 1),
            ("# nothing\n", 0),
            ("qubits 1\nbellread\n", 2),
        ];
        for (text, line) in cases {
            match Circuit::parse(text) {
                Err(Error::Parse { line: got, .. }) => assert_eq!(got, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    fn arb_gate(n: usize) -> impl Strategy<Value = Gate> {
        let spin = 1..=n;
        prop_oneof![
            (0..3usize, spin.clone(), -10.0..10.0f64).prop_map(|(a, s, angle)| Gate::Rotation {
                axis: [Axis::X, Axis::Y, Axis::Z][a],
                spin: s,
                angle
            }),
            (spin.clone(), spin, any::<bool>())
                .prop_filter("distinct spins", |(t, c, _)| t != c)
                .prop_map(|(t, c, plus)| Gate::cnot(
                    t,
                    c,
                    if plus { ControlCondition::Plus } else { ControlCondition::Minus }
                )),
            Just(Gate::NotAll),
            Just(Gate::Qft),
            Just(Gate::BellReadout),
        ]
    }

    proptest! {
        #[test]
        fn text_round_trip(
            (n, steps) in (2..=4usize).prop_flat_map(|n| (Just(n), prop::collection::vec(arb_gate(n), 0..12)))
        ) {
            let c = Circuit::new(n, steps).unwrap();
            prop_assert_eq!(Circuit::parse(&c.to_text()).unwrap(), c);
        }
    }
}
