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

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use povm_concurrence::cli::{self, Cli, RunConfig};

fn main() -> ExitCode {
    let outcome = match RunConfig::from_cli(Cli::parse()) {
        Ok(cfg) => cli::run(&cfg),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(cli::EXIT_MALFORMED as u8);
        }
    };
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    ExitCode::from(outcome.code as u8)
}
