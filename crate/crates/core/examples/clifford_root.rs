//! A matrix root Q with Q^d = (T^d − Σ ∏ a) I from a product decomposition.

use ulrich::gradedgeom::ProductDecomposition;
use ulrich::matfac::{clifford_root, verify_root};
use ulrich::polyring::PolyRing;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ring = PolyRing::rational(3);
    let forms = |list: &[&str]| list.iter().map(|s| ring.parse(s)).collect::<Result<Vec<_>, _>>();
    let dec =
        ProductDecomposition::new(3, 1, vec![forms(&["x0", "x1", "x2"])?, forms(&["x1", "x1 - x2", "x0 + x2"])?])?;
    let root = clifford_root(&dec)?;
    println!("d = {}, size {}, target {}", root.d, root.size(), root.target);
    for row in root.first_factor().to_strings().iter().take(3) {
        println!("  {}", row.join(" "));
    }
    let report = verify_root(&root);
    println!("Q^3 = f I: {}, entries linear in T: {}", report.identity_ok(), report.shape_ok());
    println!("rank of the bundle: {}", root.ulrich_rank());
    Ok(())
}
