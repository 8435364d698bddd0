use std::sync::Arc;

use ghmtq::geometry::frame_geometry;
use ghmtq::solutions::{ExtensionField, FamilyFrame, Schwarzschild};
use ghmtq::Point2;

fn main() -> ghmtq::Result<()> {
    let family = Schwarzschild::new(1.0, ExtensionField::Cartesian)?;
    let frame = FamilyFrame(Arc::new(family));
    let g = frame_geometry(&frame, Point2::new(4.0, 0.3))?;
    println!("omega = {:?}, F = {}, R = {}", g.connection.frame, g.curvature.f, g.curvature.r);
    Ok(())
}
