//! Configuration-driven experiments over `beurling-core`, with
//! deterministic CSV/JSON reports and one runner per acceptance criterion.

pub mod config;
pub mod criteria;
pub mod experiments;
pub mod function_spec;
pub mod report;

/// Builds the global thread pool, capped by `LAB_THREADS` when set.
pub fn init_threads() {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = std::env::var("LAB_THREADS").ok().and_then(|v| v.parse::<usize>().ok()).filter(|&n| n > 0) {
        b = b.num_threads(n);
    }
    let _ = b.build_global();
}

/// Writes the report files and one `.dat` file per plot series.
pub fn write_outputs(
    outcome: &experiments::Outcome,
    csv: Option<&std::path::Path>,
    json: Option<&std::path::Path>,
    xy_dir: Option<&std::path::Path>,
) -> anyhow::Result<()> {
    let mut rows = outcome.rows.clone();
    report::sort_rows(&mut rows);
    report::emit_report(&rows, csv, json)?;
    if let Some(dir) = xy_dir {
        for s in &outcome.xy {
            let name: String =
                s.name.chars().map(|c| if c.is_ascii_alphanumeric() || "._-".contains(c) { c } else { '_' }).collect();
            let text = report::xy_string((&s.columns.0, &s.columns.1), &s.points);
            report::write_file(&dir.join(format!("{name}.dat")), &text)?;
        }
    }
    Ok(())
}
