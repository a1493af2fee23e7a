//! Certificates that forms have no common zero, and smoothness of a branch.

use ulrich::gradedgeom::{
    base_point_free_certificate, decompose_in_image, elimination_certificate, jacobian_certificate, BaseVariety,
};
use ulrich::polyring::PolyRing;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ring = PolyRing::rational(3);
    let squares = ["x0^2", "x1^2", "x2^2"].iter().map(|s| ring.parse(s)).collect::<Result<Vec<_>, _>>()?;
    println!("x0^2, x1^2, x2^2: {:?}", elimination_certificate(&squares, 6)?);
    let line = ["x0", "x1"].iter().map(|s| ring.parse(s)).collect::<Result<Vec<_>, _>>()?;
    println!("x0, x1: {:?}", elimination_certificate(&line, 6)?);

    let fermat = ring.parse("x0^3 + x1^3 + x2^3")?;
    let nodal = ring.parse("x1^2*x2 - x0^3 - x0^2*x2")?;
    println!("Fermat cubic smooth: {:?}", jacobian_certificate(&fermat, 6));
    println!("nodal cubic: {:?}", jacobian_certificate(&nodal, 6));

    let p2 = BaseVariety::projective_space(2);
    let dec = decompose_in_image(&p2, 1, 3, &fermat)?.compact();
    println!(
        "factors of the Fermat decomposition have no common zero: {:?}",
        base_point_free_certificate(&p2, &dec, 6)
    );
    Ok(())
}
