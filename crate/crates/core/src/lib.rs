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

//! Concurrence-type entanglement measures for qubit registers.
//!
//! The single-qubit phase POVM `[[1, e^{i phi}], [e^{-i phi}, 1]]` has the
//! orthogonal complement `I - POVM`, which is `sigma_y` at `phi = pi/2` and
//! `sigma_x` at `phi = pi`. Tensor products of these complements give three
//! operator families:
//!
//! * W^m: `sigma_y` on a pair of sites, identity elsewhere ([`povm::w_class_operator_set`]),
//! * GHZ^m: `sigma_y` on a pair, `sigma_x` elsewhere ([`povm::ghz_full_operator_set`]),
//! * GHZ^(m-1): as GHZ^m but with one identity site ([`povm::ghz_sub_operator_set`]).
//!
//! [`concurrence`] turns each family into a pure-state value, a Wootters-style
//! mixed-state value, and (for GHZ^m) a local-unitary maximization.
//!
//! ```
//! use povm_concurrence::{concurrence, states};
//!
//! let w3 = states::w_state(3).unwrap();
//! let report = concurrence::w_class_pure(&w3, &Default::default()).unwrap();
//! assert!((report.aggregate - 1.0).abs() < 1e-12);
//! ```

pub mod cli;
pub mod concurrence;
pub mod error;
pub mod exec;
pub mod io;
pub mod linalg;
pub mod povm;
pub mod states;

pub use error::{Error, Result};
