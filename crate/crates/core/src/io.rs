// Copyright 2026 The povm-concurrence Developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except
// in compliance with the License. You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License
// is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
// or implied. See the License for the specific language governing permissions and limitations under
// the License.

//! State files and JSON output.
//!
//! A state file is one JSON object:
//!
//! ```json
//! { "kind": "pure", "qubits": 2, "amplitudes": [[0.7071, 0.0], [0.0, 0.0], [0.0, 0.0], [0.7071, 0.0]] }
//! { "kind": "ensemble", "qubits": 1, "members": [ { "weight": 0.5, "amplitudes": [[1.0, 0.0], [0.0, 0.0]] }, ... ] }
//! ```
//!
//! Amplitudes are `[re, im]` pairs in basis-index order. Every float written
//! by this module carries 17 significant digits.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::ser::{CompactFormatter, Formatter, PrettyFormatter};

use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::states::{Ensemble, PureState};

#[derive(Clone, Debug, PartialEq)]
pub enum StateFile {
    Pure(PureState),
    Ensemble(Ensemble),
}

impl StateFile {
    pub fn qubit_count(&self) -> usize {
        match self {
            StateFile::Pure(p) => p.qubit_count(),
            StateFile::Ensemble(e) => e.qubit_count(),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum RawState {
    Pure {
        qubits: usize,
        amplitudes: Vec<[f64; 2]>,
    },
    Ensemble {
        qubits: usize,
        members: Vec<RawMember>,
    },
}

#[derive(Serialize, Deserialize)]
struct RawMember {
    weight: f64,
    amplitudes: Vec<[f64; 2]>,
}

fn to_pairs(amps: &[C64]) -> Vec<[f64; 2]> {
    amps.iter().map(|z| [z.re, z.im]).collect()
}

fn from_pairs(qubits: usize, pairs: &[[f64; 2]]) -> Result<PureState> {
    if qubits == 0 || qubits > crate::linalg::MAX_QUBITS {
        return Err(Error::QubitCount {
            found: qubits,
            reason: "qubit count must be in 1..=12",
        });
    }
    if pairs.len() != 1 << qubits {
        return Err(Error::QubitMismatch {
            expected: qubits,
            found: pairs.len().checked_ilog2().unwrap_or(0) as usize,
        });
    }
    PureState::new(pairs.iter().map(|&[re, im]| C64::new(re, im)).collect())
}

/// Parses the text of a state file.
pub fn parse_state(text: &str) -> Result<StateFile> {
    let raw: RawState = serde_json::from_str(text)?;
    match raw {
        RawState::Pure { qubits, amplitudes } => {
            Ok(StateFile::Pure(from_pairs(qubits, &amplitudes)?))
        }
        RawState::Ensemble { qubits, members } => {
            let members = members
                .iter()
                .map(|m| Ok((m.weight, from_pairs(qubits, &m.amplitudes)?)))
                .collect::<Result<Vec<_>>>()?;
            Ok(StateFile::Ensemble(Ensemble::new(members)?))
        }
    }
}

pub fn load_state(path: impl AsRef<Path>) -> Result<StateFile> {
    parse_state(&fs::read_to_string(path)?)
}

pub fn state_to_string(state: &StateFile) -> String {
    let raw = match state {
        StateFile::Pure(p) => RawState::Pure {
            qubits: p.qubit_count(),
            amplitudes: to_pairs(p.amplitudes()),
        },
        StateFile::Ensemble(e) => RawState::Ensemble {
            qubits: e.qubit_count(),
            members: e
                .members()
                .iter()
                .map(|(w, s)| RawMember {
                    weight: *w,
                    amplitudes: to_pairs(s.amplitudes()),
                })
                .collect(),
        },
    };
    to_pretty_json(&raw)
}

pub fn save_state(state: &StateFile, path: impl AsRef<Path>) -> Result<()> {
    let mut text = state_to_string(state);
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

/// Serializes with 17-significant-digit floats, indented.
pub fn to_pretty_json<T: Serialize>(value: &T) -> String {
    write_with(value, Precise(PrettyFormatter::new()))
}

/// Serializes with 17-significant-digit floats on a single line.
pub fn to_compact_json<T: Serialize>(value: &T) -> String {
    write_with(value, Precise(CompactFormatter))
}

fn write_with<T: Serialize, F: Formatter>(value: &T, formatter: F) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, formatter);
    value
        .serialize(&mut ser)
        .expect("in-memory JSON serialization cannot fail");
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

/// Formatter adapter that prints every f64 as `d.dddddddddddddddde±x`.
struct Precise<F>(F);

impl<F: Formatter> Formatter for Precise<F> {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}
