//! Gauges and duality maps of the built-in body families.
//!
//! For each body, checks `φ(x)·x = ‖x‖²`, the homogeneity `φ(λx) = λφ(x)`
//! and agreement of `φ` with a finite-difference gradient of `½‖x‖²`.
//!
//! ```bash
//! cargo run --example duality_maps
//! ```

use nalgebra::Matrix2;
use packrigid::body::{ConvexBody, Vec2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dirs = vec![
        Vec2::new(1.0, 0.0),
        Vec2::new(0.3, 1.0),
        Vec2::new(-0.8, 0.6),
    ];
    let bodies = [
        ("disc", ConvexBody::disc()),
        (
            "ellipse",
            ConvexBody::ellipse(Matrix2::new(2.0, 0.5, 0.0, 1.0))?,
        ),
        ("3-norm", ConvexBody::pnorm(3.0)?),
        ("1.5-norm", ConvexBody::pnorm(1.5)?),
        ("exp-family", ConvexBody::exp_family(dirs, 3.0)?),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let h = 1e-6;
    for (name, body) in &bodies {
        let (mut pairing, mut homogeneity, mut gradient) = (0.0f64, 0.0f64, 0.0f64);
        for _ in 0..200 {
            let x = Vec2::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            let phi = body.duality_map(&x)?;
            let norm = body.norm(&x)?;
            pairing = pairing.max((phi.dot(&x) - norm * norm).abs() / (1.0 + x.norm_squared()));
            let lambda = rng.gen_range(0.1..10.0);
            let scaled = body.duality_map(&(x * lambda))?;
            homogeneity = homogeneity.max((scaled - phi * lambda).norm() / (1.0 + scaled.norm()));
            let half_square = |y: Vec2| -> Result<f64, packrigid::body::BodyError> {
                let n = body.norm(&y)?;
                Ok(0.5 * n * n)
            };
            let fd = Vec2::new(
                (half_square(x + Vec2::new(h, 0.0))? - half_square(x - Vec2::new(h, 0.0))?)
                    / (2.0 * h),
                (half_square(x + Vec2::new(0.0, h))? - half_square(x - Vec2::new(0.0, h))?)
                    / (2.0 * h),
            );
            gradient = gradient.max((fd - phi).norm() / (1.0 + phi.norm()));
        }
        println!("{name:<11} pairing {pairing:.1e}  homogeneity {homogeneity:.1e}  gradient {gradient:.1e}");
    }
    Ok(())
}
