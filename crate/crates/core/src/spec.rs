//! JSON description of a convex body.
//!
//! ```json
//! {"kind": "ellipse", "center": [0, 0], "shape": [[1, 0], [0, 4]]}
//! {"kind": "pnorm", "p": 4}
//! {"kind": "polygon", "vertices": [[1, 0], [0, 1], [-1, 0], [0, -1]]}
//! {"kind": "projective_image", "base": {"kind": "pnorm", "p": 2},
//!  "map": [[1, 0, 0], [0, 1, 0], [0.3, 0, 1]]}
//! ```

use nalgebra::{Matrix2, Matrix3};
use serde::{Deserialize, Serialize};

use crate::body::ConvexBody;
use crate::error::{GeometryError, Result};
use crate::projective::{AffinePoint, Projectivity};
use crate::scalar::Real;

type Pair = [f64; 2];

fn identity2() -> [Pair; 2] {
    [[1.0, 0.0], [0.0, 1.0]]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BodySpec {
    /// `(x − center)ᵀ shape (x − center) < 1`.
    Ellipse {
        center: Pair,
        shape: [Pair; 2],
    },
    /// `center + scale·u` with `‖u‖_p < 1`.
    Pnorm {
        p: f64,
        #[serde(default = "identity2")]
        scale: [Pair; 2],
        #[serde(default)]
        center: Pair,
    },
    Polygon {
        vertices: Vec<Pair>,
    },
    ProjectiveImage {
        base: Box<BodySpec>,
        map: [[f64; 3]; 3],
    },
}

fn point<T: Real>(p: &Pair) -> Result<AffinePoint<T>> {
    finite(p)?;
    Ok(AffinePoint::new(T::lit(p[0]), T::lit(p[1])))
}

fn finite(values: &[f64]) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(GeometryError::InvalidBody("non-finite number in body spec".into()))
    }
}

fn matrix2<T: Real>(m: &[Pair; 2]) -> Result<Matrix2<T>> {
    finite(m.as_flattened())?;
    Ok(Matrix2::new(T::lit(m[0][0]), T::lit(m[0][1]), T::lit(m[1][0]), T::lit(m[1][1])))
}

impl BodySpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| GeometryError::InvalidBody(e.to_string()))
    }

    pub fn to_body<T: Real>(&self) -> Result<ConvexBody<T>> {
        match self {
            Self::Ellipse { center, shape } => ConvexBody::ellipse(point(center)?, matrix2(shape)?),
            Self::Pnorm { p, scale, center } => {
                finite(&[*p])?;
                ConvexBody::pnorm_ball(T::lit(*p), matrix2(scale)?, point(center)?)
            }
            Self::Polygon { vertices } => ConvexBody::polygon(vertices.iter().map(point).collect::<Result<_>>()?),
            Self::ProjectiveImage { base, map } => {
                finite(map.as_flattened())?;
                let m = Matrix3::from_fn(|i, j| T::lit(map[i][j]));
                let map = Projectivity::new(m).map_err(|_| GeometryError::InvalidBody("singular map".into()))?;
                ConvexBody::projective_image(base.to_body()?, map)
            }
        }
    }
}
