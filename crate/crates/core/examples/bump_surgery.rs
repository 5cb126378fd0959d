//! Local reshaping of a body.
//!
//! Adds a polynomial bump to the profile of a disc, checks that the value
//! at the contact angle is unchanged while its slope moves by the requested
//! amount, then turns the supports of an exp-family body at three boundary
//! points and reports how far the body moved.
//!
//! ```bash
//! cargo run --example bump_surgery
//! ```

use packrigid::body::{
    bump_profile, radial_distance, retarget_supports, ConvexBody, RadialProfile, Vec2,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = RadialProfile::constant(1.0)?;
    let (x1, x2, c, a) = (0.2, 0.8, 0.45, 0.05);
    let g = bump_profile(&f, x1, x2, c, a)?;
    let (fc, gc) = (f.jet(c)?, g.jet(c)?);
    println!("g(c) − f(c)   = {:.1e}", gc.f - fc.f);
    println!("g'(c) − f'(c) = {:.12} (requested {a})", gc.df - fc.df);
    for x in [x1, x2] {
        let (fx, gx) = (f.jet(x)?, g.jet(x)?);
        let gap = (gx.f - fx.f)
            .abs()
            .max((gx.df - fx.df).abs())
            .max((gx.ddf - fx.ddf).abs());
        println!("C² mismatch at {x}: {gap:.1e}");
    }
    println!("min curvature of g: {:.4}", g.min_curvature()?.0);

    let dirs = vec![
        Vec2::new(1.0, 0.0),
        Vec2::new(0.3, 1.0),
        Vec2::new(-0.8, 0.6),
    ];
    let body = ConvexBody::exp_family(dirs, 3.0)?;
    let mut contacts = Vec::new();
    let mut targets = Vec::new();
    for angle in [0.3f64, 1.4, 2.5] {
        let d = Vec2::new(angle.cos(), angle.sin());
        let x = d / body.norm(&d)?;
        let y = body.duality_map(&x)?;
        let turn = 1e-3f64;
        targets.push(Vec2::new(
            turn.cos() * y.x - turn.sin() * y.y,
            turn.sin() * y.x + turn.cos() * y.y,
        ));
        contacts.push(x);
    }
    let out = retarget_supports(&body, &contacts, &targets, 1e-2)?;
    for (x, y) in contacts.iter().zip(&targets) {
        let phi = out.body.duality_map(x)?;
        let cross = phi.x * y.y - phi.y * y.x;
        println!(
            "‖x‖ on new body {:.12}, support misalignment {:.1e}",
            out.body.norm(x)?,
            cross.abs() / (phi.norm() * y.norm())
        );
    }
    println!(
        "radial distance to the original body {:.3e}",
        radial_distance(&body, &out.body)?
    );
    Ok(())
}
