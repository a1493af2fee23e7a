//! Graded pieces of coordinate rings and surjectivity of multiplication maps.

use ulrich::gradedgeom::{is_surjective, quotient_basis, BaseVariety};
use ulrich::polyring::PolyRing;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p2 = BaseVariety::projective_space(2);
    for n in 0..4 {
        let piece = quotient_basis(&p2, n)?;
        println!("P^2, degree {n}: dim {}", piece.dim());
    }

    for big_n in 1..=3 {
        let v = BaseVariety::projective_space(big_n);
        for (n, m) in [(1, 2), (1, 3), (2, 2)] {
            let rep = is_surjective(&v, n, m);
            println!("P^{big_n}, n = {n}, m = {m}: image {} of {}", rep.image_dim, rep.target_dim);
        }
    }

    let ring = PolyRing::rational(4);
    let quadric = BaseVariety::complete_intersection(3, vec![ring.parse("x0*x3 - x1*x2")?])?;
    let piece = quotient_basis(&quadric, 2)?;
    let basis: Vec<String> = piece.basis_polys().iter().map(|p| p.to_string()).collect();
    println!("quadric surface, degree 2: dim {} with basis {}", piece.dim(), basis.join(", "));
    let reduced = piece.lift(&piece.reduce(&ring.parse("x1*x2")?)?);
    println!("x1*x2 reduces to {reduced}");
    let rep = is_surjective(&quadric, 1, 2);
    println!("quadric surface, n = 1, m = 2: image {} of {}", rep.image_dim, rep.target_dim);
    Ok(())
}
