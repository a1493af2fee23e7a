//! det Q is a fixed scalar times f^(m/d).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ulrich::gradedgeom::ProductDecomposition;
use ulrich::matfac::{clifford_root, determinant_check};
use ulrich::polyring::PolyRing;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ring = PolyRing::rational(2);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let cases: [(u32, &[&[&str]]); 3] = [
        (2, &[&["x0", "x1"], &["x0 + x1", "x0"]]),
        (3, &[&["x0", "x1", "x0 - x1"]]),
        (3, &[&["x0", "x1", "x1"], &["x1", "x0", "x0 + 2*x1"]]),
    ];
    for (d, terms) in cases {
        let terms = terms
            .iter()
            .map(|t| t.iter().map(|s| ring.parse(s)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let root = clifford_root(&ProductDecomposition::new(d, 1, terms)?)?;
        let rep = determinant_check(&root, 5, &mut rng)?;
        println!(
            "d = {d}, size {}: det = ({}) f^{} at {} points, symbolic {:?}",
            root.size(),
            rep.ratio.map_or("inconsistent".to_string(), |c| c.to_string()),
            rep.exponent,
            rep.samples_used,
            rep.symbolic
        );
    }
    Ok(())
}
