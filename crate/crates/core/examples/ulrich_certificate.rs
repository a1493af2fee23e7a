//! The full pipeline: decompose a branch, build its matrix root, verify it.

use ulrich::gradedgeom::BaseVariety;
use ulrich::matfac::{ulrich_certificate, UlrichOptions};
use ulrich::polyring::PolyRing;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p2 = BaseVariety::projective_space(2);
    for (d, branch) in [(2, "x0*x1"), (2, "x0^2 + x1*x2"), (3, "x0^3 + x1^3 + x2^3")] {
        let s = p2.ring().parse(branch)?;
        let cert = ulrich_certificate(&p2, 1, d, &s, &UlrichOptions::default())?;
        println!("T^{d} = {branch}: matrix size {}, rank {}", cert.root.size(), cert.rank);
        for line in &cert.log {
            println!("  {line}");
        }
    }

    let ring = PolyRing::rational(4);
    let quadric = BaseVariety::complete_intersection(3, vec![ring.parse("x0^2 + x1^2 + x2^2 + x3^2")?])?;
    let s = ring.parse("x0^2 - x1*x3")?;
    let cert = ulrich_certificate(&quadric, 1, 2, &s, &UlrichOptions::default())?;
    println!("double cover of a quadric surface: rank {}", cert.rank);
    Ok(())
}
