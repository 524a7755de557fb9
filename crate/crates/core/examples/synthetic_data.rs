//! Writes a synthetic HR CSV for trying the command-line tool.
//!
//! cargo run --example synthetic_data -- hr.csv 2000 0.05

fn main() -> attrition::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let path = args.first().map(String::as_str).unwrap_or("hr_synthetic.csv");
    let rows = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(1000);
    let missing = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(0.05);
    attrition::fixtures::synthetic_hr(rows, 0, missing).save_csv(path)?;
    println!("wrote {rows} rows to {path}");
    Ok(())
}
