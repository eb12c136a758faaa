//! Pulse-program text format.
//!
//! One statement per line, `#` starts a comment:
//!
//! ```text
//! set nmax_x=<int> nmax_y=<int> guard=<int>
//! prepare q=<g|e> nx=<int> ny=<int>
//! pulse axis=<x|y> k=<int> eta=<real> omega=<real> t=<real|auto_vacuum_pi|auto_super_pi(<int>)> form=<closed|full>
//! rotate theta=<angle> phi=<angle>
//! measure q=<g|e>
//! ```
//!
//! `set` lines come before any step and may omit keys (defaults 12, 12, 4).
//! Angles are reals or multiples of `pi`: `pi`, `-pi/2`, `3*pi/4`, `0.5*pi`.

use std::f64::consts::PI;
use std::fmt::{self, Write as _};

use crate::fock::{Axis, Level, Truncation};
use crate::protocol::Step;
use crate::sideband::{AutoDuration, Form, PulseDuration, PulseSpec, RotationSpec};

#[derive(Clone, Debug, PartialEq)]
pub struct Program {
    pub trunc: Truncation,
    pub steps: Vec<Step>,
}

impl Program {
    pub fn new(trunc: Truncation, steps: Vec<Step>) -> Self {
        Program { trunc, steps }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Syntax,
    Semantic,
}

/// Parse failure with a 1-based source location.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProgramError {
    pub kind: ErrorKind,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ProgramError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ErrorKind::Syntax => "syntax error",
            ErrorKind::Semantic => "semantic error",
        };
        write!(
            f,
            "{kind} at line {}, column {}: {}",
            self.line, self.column, self.message
        )
    }
}

impl std::error::Error for ProgramError {}

#[derive(Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    let mut col = 0;
    for (byte, ch) in line.char_indices() {
        col += 1;
        if ch.is_whitespace() {
            if let Some((b, c)) = start.take() {
                out.push(Token {
                    text: &line[b..byte],
                    column: c,
                });
            }
        } else if start.is_none() {
            start = Some((byte, col));
        }
    }
    if let Some((b, c)) = start {
        out.push(Token {
            text: &line[b..],
            column: c,
        });
    }
    out
}

struct Statement<'a> {
    line: usize,
    command: Token<'a>,
    args: Vec<(Token<'a>, Token<'a>)>,
}

impl<'a> Statement<'a> {
    fn syntax(&self, column: usize, message: impl Into<String>) -> ProgramError {
        ProgramError {
            kind: ErrorKind::Syntax,
            line: self.line,
            column,
            message: message.into(),
        }
    }

    fn semantic(&self, message: impl Into<String>) -> ProgramError {
        ProgramError {
            kind: ErrorKind::Semantic,
            line: self.line,
            column: self.command.column,
            message: message.into(),
        }
    }

    /// Checks keys against `allowed` and returns values in that order.
    fn keyed(
        &self,
        allowed: &[&str],
        required: bool,
    ) -> Result<Vec<Option<Token<'a>>>, ProgramError> {
        let mut values: Vec<Option<Token<'a>>> = vec![None; allowed.len()];
        for (key, value) in &self.args {
            let Some(slot) = allowed.iter().position(|k| *k == key.text) else {
                return Err(self.syntax(
                    key.column,
                    format!(
                        "unknown key '{}' for '{}' (expected {})",
                        key.text,
                        self.command.text,
                        allowed.join(", ")
                    ),
                ));
            };
            if values[slot].is_some() {
                return Err(self.syntax(key.column, format!("duplicate key '{}'", key.text)));
            }
            values[slot] = Some(*value);
        }
        if required {
            if let Some(missing) = allowed.iter().zip(&values).find(|(_, v)| v.is_none()) {
                return Err(self.syntax(
                    self.command.column,
                    format!("'{}' is missing key '{}'", self.command.text, missing.0),
                ));
            }
        }
        Ok(values)
    }
}

fn split_statement(line_no: usize, line: &str) -> Result<Option<Statement<'_>>, ProgramError> {
    let body = line.split('#').next().unwrap_or("");
    let tokens = tokenize(body);
    let Some((&command, rest)) = tokens.split_first() else {
        return Ok(None);
    };
    let mut args = Vec::with_capacity(rest.len());
    for tok in rest {
        let Some(eq) = tok.text.find('=') else {
            return Err(ProgramError {
                kind: ErrorKind::Syntax,
                line: line_no,
                column: tok.column,
                message: format!("expected key=value, found '{}'", tok.text),
            });
        };
        let key = Token {
            text: &tok.text[..eq],
            column: tok.column,
        };
        let value = Token {
            text: &tok.text[eq + 1..],
            column: tok.column + tok.text[..=eq].chars().count(),
        };
        if key.text.is_empty() || value.text.is_empty() {
            return Err(ProgramError {
                kind: ErrorKind::Syntax,
                line: line_no,
                column: tok.column,
                message: format!("malformed key=value pair '{}'", tok.text),
            });
        }
        args.push((key, value));
    }
    Ok(Some(Statement {
        line: line_no,
        command,
        args,
    }))
}

fn parse_uint(st: &Statement<'_>, tok: Token<'_>, what: &str) -> Result<usize, ProgramError> {
    tok.text.parse::<usize>().map_err(|_| {
        st.syntax(
            tok.column,
            format!(
                "{what} must be a non-negative integer, found '{}'",
                tok.text
            ),
        )
    })
}

fn parse_real(st: &Statement<'_>, tok: Token<'_>, what: &str) -> Result<f64, ProgramError> {
    match tok.text.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(st.syntax(
            tok.column,
            format!("{what} must be a finite real number, found '{}'", tok.text),
        )),
    }
}

/// Reals, or `[-][<real>*]pi[/<real>]`.
fn angle_value(text: &str) -> Option<f64> {
    if let Ok(v) = text.parse::<f64>() {
        return v.is_finite().then_some(v);
    }
    let (sign, rest) = match text.strip_prefix('-') {
        Some(r) => (-1.0, r),
        None => (1.0, text.strip_prefix('+').unwrap_or(text)),
    };
    let at = rest.find("pi")?;
    let (head, tail) = (&rest[..at], &rest[at + 2..]);
    let coeff = if head.is_empty() {
        1.0
    } else {
        head.strip_suffix('*')?.parse::<f64>().ok()?
    };
    let denom = if tail.is_empty() {
        1.0
    } else {
        tail.strip_prefix('/')?.parse::<f64>().ok()?
    };
    if !coeff.is_finite() || !denom.is_finite() || denom == 0.0 {
        return None;
    }
    let v = sign * (coeff * PI / denom);
    v.is_finite().then_some(v)
}

fn parse_angle(st: &Statement<'_>, tok: Token<'_>, what: &str) -> Result<f64, ProgramError> {
    angle_value(tok.text).ok_or_else(|| {
        st.syntax(
            tok.column,
            format!(
                "{what} must be a real or a multiple of pi, found '{}'",
                tok.text
            ),
        )
    })
}

fn parse_level(st: &Statement<'_>, tok: Token<'_>) -> Result<Level, ProgramError> {
    match tok.text {
        "g" => Ok(Level::Ground),
        "e" => Ok(Level::Excited),
        other => Err(st.syntax(
            tok.column,
            format!("invalid qubit level '{other}' (expected g or e)"),
        )),
    }
}

fn parse_duration(st: &Statement<'_>, tok: Token<'_>) -> Result<PulseDuration, ProgramError> {
    if tok.text == "auto_vacuum_pi" {
        return Ok(PulseDuration::Auto(AutoDuration::VacuumPi));
    }
    if let Some(inner) = tok.text.strip_prefix("auto_super_pi(") {
        let horizon = inner
            .strip_suffix(')')
            .and_then(|h| h.parse::<u32>().ok())
            .ok_or_else(|| {
                st.syntax(
                    tok.column,
                    format!("malformed search horizon in '{}'", tok.text),
                )
            })?;
        return Ok(PulseDuration::Auto(AutoDuration::SuperpositionPi {
            horizon,
        }));
    }
    match tok.text.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(PulseDuration::Seconds(v)),
        _ => Err(st.syntax(
            tok.column,
            format!(
                "t must be a real, auto_vacuum_pi or auto_super_pi(<int>), found '{}'",
                tok.text
            ),
        )),
    }
}

fn parse_pulse(st: &Statement<'_>) -> Result<PulseSpec, ProgramError> {
    let v = st.keyed(&["axis", "k", "eta", "omega", "t", "form"], true)?;
    let get = |i: usize| v[i].expect("required");
    let axis = match get(0).text {
        "x" => Axis::X,
        "y" => Axis::Y,
        other => {
            return Err(st.syntax(
                get(0).column,
                format!("invalid axis '{other}' (expected x or y)"),
            ))
        }
    };
    let k = get(1).text.parse::<u32>().map_err(|_| {
        st.syntax(
            get(1).column,
            format!("k must be a positive integer, found '{}'", get(1).text),
        )
    })?;
    let eta = parse_real(st, get(2), "eta")?;
    let omega = parse_real(st, get(3), "omega")?;
    let duration = parse_duration(st, get(4))?;
    let form = match get(5).text {
        "closed" => Form::Closed,
        "full" => Form::Full,
        other => {
            return Err(st.syntax(
                get(5).column,
                format!("invalid form '{other}' (expected closed or full)"),
            ))
        }
    };
    Ok(PulseSpec {
        axis,
        k,
        eta,
        omega,
        duration,
        form,
    })
}

pub fn parse(text: &str) -> Result<Program, ProgramError> {
    let mut sizes: [Option<usize>; 3] = [None; 3];
    let mut last_set: Option<(usize, usize)> = None;
    let mut steps: Vec<(Step, Statement<'_>)> = Vec::new();

    for (i, line) in text.lines().enumerate() {
        let Some(st) = split_statement(i + 1, line)? else {
            continue;
        };
        let step = match st.command.text {
            "set" => {
                if !steps.is_empty() {
                    return Err(st.semantic("'set' must precede all steps"));
                }
                let v = st.keyed(&["nmax_x", "nmax_y", "guard"], false)?;
                for (slot, val) in v.iter().enumerate() {
                    if let Some(tok) = val {
                        if sizes[slot].is_some() {
                            return Err(st.syntax(tok.column, "setting given twice"));
                        }
                        sizes[slot] = Some(parse_uint(&st, *tok, "truncation setting")?);
                    }
                }
                last_set = Some((st.line, st.command.column));
                continue;
            }
            "prepare" => {
                let v = st.keyed(&["q", "nx", "ny"], true)?;
                Step::Prepare {
                    level: parse_level(&st, v[0].expect("required"))?,
                    n_x: parse_uint(&st, v[1].expect("required"), "nx")?,
                    n_y: parse_uint(&st, v[2].expect("required"), "ny")?,
                }
            }
            "pulse" => Step::SidebandPulse(parse_pulse(&st)?),
            "rotate" => {
                let v = st.keyed(&["theta", "phi"], true)?;
                Step::Rotate(RotationSpec {
                    theta: parse_angle(&st, v[0].expect("required"), "theta")?,
                    phi: parse_angle(&st, v[1].expect("required"), "phi")?,
                })
            }
            "measure" => {
                let v = st.keyed(&["q"], true)?;
                Step::MeasureQubit(parse_level(&st, v[0].expect("required"))?)
            }
            other => {
                return Err(st.syntax(
                    st.command.column,
                    format!(
                    "unknown statement '{other}' (expected set, prepare, pulse, rotate or measure)"
                ),
                ))
            }
        };
        steps.push((step, st));
    }

    let trunc = Truncation::new(
        sizes[0].unwrap_or(Truncation::DEFAULT_N_MAX),
        sizes[1].unwrap_or(Truncation::DEFAULT_N_MAX),
        sizes[2].unwrap_or(Truncation::DEFAULT_GUARD),
    )
    .map_err(|e| {
        let (line, column) = last_set.unwrap_or((1, 1));
        ProgramError {
            kind: ErrorKind::Semantic,
            line,
            column,
            message: e.to_string(),
        }
    })?;

    for (i, (step, st)) in steps.iter().enumerate() {
        match step {
            Step::Prepare { n_x, n_y, .. } => {
                if i != 0 {
                    return Err(st.semantic("'prepare' may only appear once, as the first step"));
                }
                trunc
                    .check_fock(*n_x, *n_y)
                    .map_err(|e| st.semantic(e.to_string()))?;
                if trunc.in_guard_band(Axis::X, *n_x) || trunc.in_guard_band(Axis::Y, *n_y) {
                    return Err(st.semantic(format!(
                        "prepared state ({n_x}, {n_y}) lies in the guard band"
                    )));
                }
            }
            _ if i == 0 => return Err(st.semantic("the first step must be 'prepare'")),
            Step::SidebandPulse(p) => p.validate(&trunc).map_err(|e| st.semantic(e.to_string()))?,
            _ => {}
        }
    }

    Ok(Program {
        trunc,
        steps: steps.into_iter().map(|(s, _)| s).collect(),
    })
}

fn level_symbol(l: Level) -> &'static str {
    l.symbol()
}

/// Canonical text: one `set` line with every key, then one step per line,
/// keys in grammar order, reals in shortest round-trip form.
pub fn serialize(program: &Program) -> String {
    let t = &program.trunc;
    let mut out = String::new();
    writeln!(
        out,
        "set nmax_x={} nmax_y={} guard={}",
        t.n_max_x(),
        t.n_max_y(),
        t.guard()
    )
    .unwrap();
    for step in &program.steps {
        match step {
            Step::Prepare { level, n_x, n_y } => writeln!(
                out,
                "prepare q={} nx={} ny={}",
                level_symbol(*level),
                n_x,
                n_y
            )
            .unwrap(),
            Step::SidebandPulse(p) => {
                let t = match p.duration {
                    PulseDuration::Seconds(s) => format!("{s:?}"),
                    PulseDuration::Auto(AutoDuration::VacuumPi) => "auto_vacuum_pi".to_string(),
                    PulseDuration::Auto(AutoDuration::SuperpositionPi { horizon }) => {
                        format!("auto_super_pi({horizon})")
                    }
                };
                writeln!(
                    out,
                    "pulse axis={} k={} eta={:?} omega={:?} t={} form={}",
                    p.axis,
                    p.k,
                    p.eta,
                    p.omega,
                    t,
                    p.form.keyword()
                )
                .unwrap()
            }
            Step::Rotate(r) => writeln!(out, "rotate theta={:?} phi={:?}", r.theta, r.phi).unwrap(),
            Step::MeasureQubit(l) => writeln!(out, "measure q={}", level_symbol(*l)).unwrap(),
        }
    }
    out
}
