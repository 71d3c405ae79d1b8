use std::process::ExitCode;

use clap::Parser;

use cofix_cli::{run_experiment, ExperimentSpec};

fn main() -> ExitCode {
    let spec = ExperimentSpec::parse();
    match run_experiment(&spec) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let report = serde_json::to_string_pretty(&e.report()).expect("serializable");
            // best effort: the output directory may be what failed
            let _ = std::fs::create_dir_all(&spec.out).and_then(|_| std::fs::write(spec.out.join("error.json"), format!("{report}\n")));
            eprintln!("{report}");
            ExitCode::FAILURE
        }
    }
}
