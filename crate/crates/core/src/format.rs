//! Text circuit format: one gate per line, `register <name> <width>` header
//! lines, `#` comments.
//!
//! Gate lines are `<kind> [<±>q<idx>...controls] q<idx>target`, with
//! lowercase kinds `h`, `x`, `z`, `phase(θ)`, `cx`, `cz`, `cphase(θ)`,
//! `toffoli`, `mcx`, `gphase(θ)`. A control without a sign prefix is
//! positive. The serializer canonicalizes: all-positive controlled X/Z/PHASE
//! gates use the named forms (`cx`, `toffoli`, `cz`, `cphase`), anything
//! else spells its controls out with explicit `+`/`-` prefixes on the base
//! kind (or `mcx` for X).

use std::fmt::Write as _;

use crate::circuit::{Circuit, Control, Gate, GateKind, Level, Polarity, RegisterLayout};
use crate::error::{Error, Result};

pub fn serialize(circuit: &Circuit) -> String {
    let mut out = String::new();
    for reg in circuit.layout().registers() {
        writeln!(out, "register {} {}", reg.name, reg.width).unwrap();
    }
    for gate in circuit.gates() {
        serialize_gate(gate, &mut out);
    }
    out
}

fn serialize_gate(gate: &Gate, out: &mut String) {
    let all_positive = gate
        .controls
        .iter()
        .all(|c| c.polarity == Polarity::Positive);
    let nc = gate.controls.len();
    let (name, named_controls): (String, bool) = match gate.kind {
        GateKind::H => ("h".into(), false),
        GateKind::X => match (nc, all_positive) {
            (0, _) => ("x".into(), false),
            (1, true) => ("cx".into(), true),
            (2, true) => ("toffoli".into(), true),
            _ => ("mcx".into(), false),
        },
        GateKind::Z => match (nc, all_positive) {
            (0, _) => ("z".into(), false),
            (1, true) => ("cz".into(), true),
            _ => ("z".into(), false),
        },
        GateKind::Phase(theta) => match (nc, all_positive) {
            (0, _) => (format!("phase({theta})"), false),
            (1, true) => (format!("cphase({theta})"), true),
            _ => (format!("phase({theta})"), false),
        },
        GateKind::GlobalPhase(theta) => (format!("gphase({theta})"), false),
    };
    out.push_str(&name);
    for c in &gate.controls {
        if named_controls {
            // canonical named forms are all-positive; no sign prefix
            write!(out, " q{}", c.qubit).unwrap();
        } else {
            let sign = match c.polarity {
                Polarity::Positive => "+",
                Polarity::Negative => "-",
            };
            write!(out, " {sign}q{}", c.qubit).unwrap();
        }
    }
    if let Some(t) = gate.target {
        write!(out, " q{t}").unwrap();
    }
    out.push('\n');
}

pub fn parse(text: &str) -> Result<Circuit> {
    let mut registers: Vec<(String, usize)> = Vec::new();
    let mut raw_gates: Vec<(usize, Gate)> = Vec::new();
    let mut in_header = true;

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens[0] == "register" {
            if !in_header {
                return Err(Error::Parse {
                    line: line_no,
                    msg: "register lines must precede gates".into(),
                });
            }
            if tokens.len() != 3 {
                return Err(Error::Parse {
                    line: line_no,
                    msg: "expected `register <name> <width>`".into(),
                });
            }
            let width: usize = tokens[2].parse().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("bad register width `{}`", tokens[2]),
            })?;
            if width == 0 {
                return Err(Error::Parse {
                    line: line_no,
                    msg: "register width must be positive".into(),
                });
            }
            if registers.iter().any(|(n, _)| n == tokens[1]) {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("duplicate register `{}`", tokens[1]),
                });
            }
            registers.push((tokens[1].to_string(), width));
            continue;
        }
        in_header = false;
        raw_gates.push((line_no, parse_gate(&tokens, line_no)?));
    }

    if registers.is_empty() {
        return Err(Error::Parse {
            line: 1,
            msg: "no register declarations".into(),
        });
    }
    let widths: Vec<(&str, usize)> = registers.iter().map(|(n, w)| (n.as_str(), *w)).collect();
    let layout = RegisterLayout::new(&widths);

    let level = if raw_gates.iter().all(|(_, g)| g.is_elementary()) {
        Level::Elementary
    } else {
        Level::Composite
    };
    let mut circuit = Circuit::new(layout, level);
    for (line_no, gate) in raw_gates {
        circuit.push(gate).map_err(|e| Error::Parse {
            line: line_no,
            msg: e.to_string(),
        })?;
    }
    Ok(circuit)
}

fn parse_gate(tokens: &[&str], line: usize) -> Result<Gate> {
    let kind_token = tokens[0];
    let (name, theta) = match kind_token.find('(') {
        Some(pos) => {
            let inner = kind_token[pos..]
                .strip_prefix('(')
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(|| Error::Parse {
                    line,
                    msg: format!("malformed parameter in `{kind_token}`"),
                })?;
            let theta: f64 = inner.parse().map_err(|_| Error::Parse {
                line,
                msg: format!("bad angle `{inner}`"),
            })?;
            (&kind_token[..pos], Some(theta))
        }
        None => (kind_token, None),
    };

    let (kind, min_controls) = match (name, theta) {
        ("h", None) => (GateKind::H, 0),
        ("x", None) => (GateKind::X, 0),
        ("cx", None) => (GateKind::X, 1),
        ("toffoli", None) => (GateKind::X, 2),
        ("mcx", None) => (GateKind::X, 1),
        ("z", None) => (GateKind::Z, 0),
        ("cz", None) => (GateKind::Z, 1),
        ("phase", Some(t)) => (GateKind::Phase(t), 0),
        ("cphase", Some(t)) => (GateKind::Phase(t), 1),
        ("gphase", Some(t)) => (GateKind::GlobalPhase(t), 0),
        _ => {
            return Err(Error::Parse {
                line,
                msg: format!("unknown gate `{kind_token}`"),
            })
        }
    };

    let targets = if matches!(kind, GateKind::GlobalPhase(_)) {
        0
    } else {
        1
    };
    let rest = &tokens[1..];
    if rest.len() < targets + min_controls {
        return Err(Error::Parse {
            line,
            msg: format!(
                "`{name}` needs at least {} qubit operands, got {}",
                targets + min_controls,
                rest.len()
            ),
        });
    }
    let (control_tokens, target_tokens) = rest.split_at(rest.len() - targets);

    let mut controls = Vec::with_capacity(control_tokens.len());
    for tok in control_tokens {
        controls.push(parse_control(tok, line)?);
    }
    let target = match target_tokens.first() {
        Some(tok) => Some(parse_qubit(tok, line)?),
        None => None,
    };
    Ok(Gate {
        kind,
        target,
        controls,
    })
}

fn parse_control(token: &str, line: usize) -> Result<Control> {
    let (polarity, rest) = match token.as_bytes().first() {
        Some(b'+') => (Polarity::Positive, &token[1..]),
        Some(b'-') => (Polarity::Negative, &token[1..]),
        _ => (Polarity::Positive, token),
    };
    Ok(Control {
        qubit: parse_qubit(rest, line)?,
        polarity,
    })
}

fn parse_qubit(token: &str, line: usize) -> Result<usize> {
    token
        .strip_prefix('q')
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Parse {
            line,
            msg: format!("expected a qubit like `q3`, got `{token}`"),
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn cx_round_trips_bytes() {
        let text = "register q 4\ncx q3 q0\n";
        let c = parse(text).unwrap();
        assert_eq!(serialize(&c), text);
        assert_eq!(c.gates(), &[Gate::cx(3, 0)]);
    }

    #[test]
    fn mcx_polarities() {
        let c = parse("register q 3\nmcx +q2 -q1 q0\n").unwrap();
        assert_eq!(
            c.gates(),
            &[Gate::mcx(vec![Control::pos(2), Control::neg(1)], 0)]
        );
        assert_eq!(serialize(&c), "register q 3\nmcx +q2 -q1 q0\n");
    }

    #[test]
    fn whitespace_and_comments_normalize() {
        let messy = "# a circuit\nregister  q   2\n\n  h   q0   # superpose\n cz  q0  q1\n";
        let c = parse(messy).unwrap();
        assert_eq!(serialize(&c), "register q 2\nh q0\ncz q0 q1\n");
        // canonical output is a fixed point
        let again = parse(&serialize(&c)).unwrap();
        assert_eq!(serialize(&again), serialize(&c));
    }

    #[test]
    fn parametrized_gates_round_trip() {
        let layout = RegisterLayout::single(2);
        let gates = vec![
            Gate::phase(PI / 4.0, 0),
            Gate::cphase(-PI, 1, 0),
            Gate::global_phase(PI),
            Gate::global_phase(0.25).controlled(Control::neg(1)),
        ];
        let c = Circuit::from_gates(layout, gates, Level::Composite).unwrap();
        let text = serialize(&c);
        let back = parse(&text).unwrap();
        assert_eq!(back.gates(), c.gates());
        assert_eq!(serialize(&back), text);
    }

    #[test]
    fn canonical_kind_names() {
        let layout = RegisterLayout::single(4);
        let gates = vec![
            Gate::toffoli(0, 1, 2),
            Gate::mcx(vec![Control::pos(0), Control::pos(1), Control::pos(2)], 3),
            Gate::z(2).with_controls(vec![Control::neg(0), Control::pos(1)]),
            Gate::h(3).controlled(Control::pos(1)),
        ];
        let c = Circuit::from_gates(layout, gates, Level::Composite).unwrap();
        let text = serialize(&c);
        assert_eq!(
            text,
            "register q 4\ntoffoli q0 q1 q2\nmcx +q0 +q1 +q2 q3\nz -q0 +q1 q2\nh +q1 q3\n"
        );
        assert_eq!(parse(&text).unwrap().gates(), c.gates());
    }

    #[test]
    fn level_inference() {
        let c = parse("register q 3\ncx q0 q1\nh q2\n").unwrap();
        assert_eq!(c.level(), Level::Elementary);
        let c = parse("register q 3\ntoffoli q0 q1 q2\n").unwrap();
        assert_eq!(c.level(), Level::Composite);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse("register q 2\nfoo q0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = parse("register q 2\ncx q0 q9\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = parse("h q0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
        let err = parse("register q 2\nphase(xyz) q0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = parse("register q 2\ncx q0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn two_qubit_count_invariant_under_round_trip() {
        let text = "register a 2\nregister b 2\ncx q0 q2\ncz q1 q3\nh q0\ncphase(0.5) q2 q1\n";
        let c = parse(text).unwrap();
        let round = parse(&serialize(&c)).unwrap();
        assert_eq!(
            c.count_two_qubit_gates().unwrap(),
            round.count_two_qubit_gates().unwrap()
        );
        assert_eq!(c.count_two_qubit_gates().unwrap(), 3);
    }
}
