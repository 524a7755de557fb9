//! The configured end-to-end run on a synthetic CSV, as the CLI `cv`
//! command performs it.

use attrition::evaluate::CvScheme;
use attrition::fixtures;
use attrition::pipeline::{run_pipeline, PipelineConfig};

fn main() -> attrition::Result<()> {
    let dir = std::env::temp_dir().join("attrition-full-pipeline");
    let data = dir.join("hr.csv");
    std::fs::create_dir_all(&dir).expect("temp dir is writable");
    fixtures::synthetic_hr(300, 2, 0.05).save_csv(&data)?;

    let config = PipelineConfig {
        data: Some(data),
        n_trees: 20,
        cv: CvScheme::Kfold { k: 5 },
        holdout: Some(0.2),
        out: dir.join("out"),
        ..PipelineConfig::default()
    };
    let outcome = run_pipeline(&config)?;
    let stages: Vec<&str> = outcome.stages.iter().map(|s| s.as_str()).collect();
    println!("stages: {}", stages.join(" -> "));
    print!("{}", outcome.metrics_text());
    for path in &outcome.written {
        println!("wrote {}", path.display());
    }
    Ok(())
}
