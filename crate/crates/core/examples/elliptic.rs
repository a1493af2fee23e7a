//! A globally generated degree-two bundle on an elliptic curve whose 2-fold
//! multiplication map misses y.

use ulrich::ellmodel::{
    decompose_ell, globally_generated, multmap_image_ell, pole_basis, FunctionElement, WeierstrassCurve,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (a, b) in [(-1, 0), (0, 1), (2, -3)] {
        let curve = WeierstrassCurve::from_ints(a, b)?;
        let l = pole_basis(&curve, 2);
        let rep = multmap_image_ell(&curve, 2, 2);
        println!("{curve}");
        println!(
            "  H0(L): {:?}, globally generated: {}",
            l.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
            globally_generated(&curve, 2)
        );
        println!(
            "  image {} of {}, cokernel {:?}",
            rep.image_dim,
            rep.target_dim(),
            rep.cokernel.iter().map(|m| m.to_string()).collect::<Vec<_>>()
        );
        println!("  y decomposes: {:?}", decompose_ell(&curve, 2, 2, &FunctionElement::y()).err());
        println!("  degree three is surjective: {}", multmap_image_ell(&curve, 3, 2).surjective());
    }
    Ok(())
}
