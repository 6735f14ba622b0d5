//! Runs every verification suite and a short symmetry hierarchy, printing
//! a one-line summary per model.

use num_complex::Complex64;
use qsym::lattice::{hierarchy_generate, Boundary, SpaceGridField, DEFAULT_TOLERANCE};
use qsym::model::{build_model, Gen, ModelKind};
use qsym::suite::{run_suite, Suite};

fn main() -> qsym::Result<()> {
    for kind in ModelKind::ALL {
        let start = std::time::Instant::now();
        let report = run_suite(kind, Suite::All, None, qsym::series::DEFAULT_ORDER)?;
        println!(
            "{:>9}: {} passed, {} failed in {:.1?}",
            kind.to_string(),
            report.passed,
            report.failed,
            start.elapsed()
        );
    }

    let model = build_model(ModelKind::Space, None);
    let seed =
        SpaceGridField::from_values(vec![Complex64::new(1.0, 0.0); 48], -3.0, 0.125, 1.0, -0.5, 0.25, Boundary::Open)?;
    let h = hierarchy_generate(&seed, &[Gen::K, Gen::C, Gen::K], &model, DEFAULT_TOLERANCE)?;
    for (g, r) in
        std::iter::once("seed".to_string()).chain(h.generators.iter().map(ToString::to_string)).zip(&h.residuals)
    {
        println!("hierarchy {g:>4}: residual {r:.2e}");
    }
    Ok(())
}
