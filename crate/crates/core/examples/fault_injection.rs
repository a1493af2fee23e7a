//! Corrupting one entry of a verified root and locating it again.

use ulrich::gradedgeom::ProductDecomposition;
use ulrich::matfac::{clifford_root, verify_root, RootFactors};
use ulrich::polyring::PolyRing;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ring = PolyRing::rational(3);
    let forms = |list: &[&str]| list.iter().map(|s| ring.parse(s)).collect::<Result<Vec<_>, _>>();
    let dec = ProductDecomposition::new(2, 1, vec![forms(&["x0", "x1"])?, forms(&["x2", "x0 - x2"])?])?;
    let mut root = clifford_root(&dec)?;
    println!("clean root passes: {}", verify_root(&root).passed());

    let RootFactors::Power(q) = &mut root.factors else { unreachable!() };
    let bumped = q.get(3, 6).clone() + q.ring().var(1);
    q.set(3, 6, bumped);
    let report = verify_root(&root);
    println!("exit code {}, {} defective positions in Q^2", report.exit_code(), report.identity_violations.len());
    for pos in &report.suspects {
        println!("suspect entry {pos}");
    }

    let RootFactors::Power(q) = &mut root.factors else { unreachable!() };
    let curved = q.get(0, 1).clone() + q.ring().var(0).pow(2);
    q.set(0, 1, curved);
    let report = verify_root(&root);
    println!(
        "after a quadratic entry: exit code {}, shape violation at {}",
        report.exit_code(),
        report.shape_violations[0].pos
    );
    Ok(())
}
