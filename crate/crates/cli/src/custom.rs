use std::sync::Arc;

use ghmtq::geometry::Signature;
use ghmtq::solutions::Family;
use ghmtq::{Jet3, Point2, Result, ScalarField2};

/// A metric given component by component, with no field-theory structure.
pub struct CustomMetric {
    h: [Arc<dyn ScalarField2>; 3],
    signature: Signature,
}

impl CustomMetric {
    pub fn new(h: [Arc<dyn ScalarField2>; 3], signature: Signature) -> Self {
        Self { h, signature }
    }
}

impl Family for CustomMetric {
    fn id(&self) -> &'static str {
        "custom_metric"
    }

    fn coordinate_names(&self) -> [&'static str; 2] {
        ["x1", "x2"]
    }

    fn signature(&self) -> Signature {
        self.signature
    }

    fn metric(&self, p: Point2) -> Result<[Jet3; 3]> {
        Ok([self.h[0].eval(p)?, self.h[1].eval(p)?, self.h[2].eval(p)?])
    }
}
