//! A small randomized campaign.
//!
//! Runs 20 trials with the default settings, prints the summary table and
//! the failure stage of every trial that did not complete. The master seed
//! can be changed with `PACKRIGID_SEED`.
//!
//! ```bash
//! cargo run --release --example trial_campaign
//! ```

use packrigid::harness::{run_control_campaign, run_theorem_trials, TrialConfig, TrialStage};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = TrialConfig {
        trials: 20,
        ..TrialConfig::default()
    }
    .with_env_seed()?;
    println!("settings:\n{}", cfg.to_toml());
    let report = run_theorem_trials(&cfg)?;
    print!("{}", report.table());
    for record in report
        .records
        .iter()
        .filter(|r| r.stage != TrialStage::Complete)
    {
        println!(
            "trial {} stopped at {:?}: {}",
            record.index,
            record.stage,
            record.error.as_deref().unwrap_or("")
        );
    }

    let control = run_control_campaign(cfg.seed, 3)?;
    for record in &control {
        println!("{record:?}");
    }
    Ok(())
}
