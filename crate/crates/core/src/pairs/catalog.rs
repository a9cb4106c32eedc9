//! Auxiliary originals `f(u)` with closed-form Laplace images.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::laplace::{forward_laplace, LaplaceImage, TimeOriginal};
use crate::numerics::{gamma_fn, QuadratureSpec};

/// A catalog entry: an original, its image and the image's pole set.
#[derive(Clone)]
pub struct TestOriginal {
    /// Canonical id such as `exp_decay:1` or `poly_exp:2,1`.
    pub id: String,
    pub description: String,
    pub original: TimeOriginal,
    pub image: LaplaceImage,
    /// Poles of `f^`, which are its only finite singularities.
    pub image_poles: Vec<Complex64>,
    /// `f^(w)` decays like `|w|^{-order}` as `|w| -> inf`.
    pub image_decay_order: f64,
}

impl fmt::Debug for TestOriginal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TestOriginal")
            .field("id", &self.id)
            .field("sigma0", &self.original.sigma0)
            .field("image_poles", &self.image_poles)
            .finish()
    }
}

impl TestOriginal {
    pub fn f(&self, u: f64) -> f64 {
        self.original.eval(u)
    }

    pub fn fhat(&self, s: Complex64) -> Complex64 {
        self.image.eval(s)
    }

    pub fn sigma0(&self) -> f64 {
        self.original.sigma0
    }

    /// Largest relative deviation between the numeric forward transform and
    /// the closed-form image on a fixed set of points right of the abscissa.
    pub fn image_consistency(&self, spec: &QuadratureSpec) -> Result<f64> {
        let base = self.sigma0() + 0.5;
        let mut worst: f64 = 0.0;
        for (dx, y) in [
            (0.0, 0.0),
            (0.0, 1.5),
            (0.5, -3.0),
            (1.5, 0.25),
            (3.0, 8.0),
            (0.0, 60.0),
        ] {
            let s = Complex64::new(base + dx, y);
            let got =
                forward_laplace(&self.original, s, spec)?.into_value("catalog image check")?;
            let want = self.fhat(s);
            worst = worst.max((got - want).norm() / want.norm().max(1e-12));
        }
        Ok(worst)
    }
}

fn exp_decay(a: f64) -> TestOriginal {
    TestOriginal {
        id: format!("exp_decay:{a}"),
        description: format!("f(u) = exp(-{a} u), f^(s) = 1/(s + {a})"),
        original: TimeOriginal::new(move |u| (-a * u).exp(), -a),
        image: LaplaceImage::new(move |s| 1.0 / (s + a), -a),
        image_poles: vec![Complex64::new(-a, 0.0)],
        image_decay_order: 1.0,
    }
}

fn poly_exp(n: u32, a: f64) -> TestOriginal {
    let factorial = gamma_fn(n as f64 + 1.0).expect("positive argument");
    let power = n as i32;
    TestOriginal {
        id: format!("poly_exp:{n},{a}"),
        description: format!("f(u) = u^{n} exp(-{a} u), f^(s) = {n}!/(s + {a})^{}", n + 1),
        original: TimeOriginal::new(move |u| u.powi(power) * (-a * u).exp(), -a),
        image: LaplaceImage::new(move |s| factorial / (s + a).powi(power + 1), -a),
        image_poles: vec![Complex64::new(-a, 0.0)],
        image_decay_order: n as f64 + 1.0,
    }
}

fn sine(a: f64) -> TestOriginal {
    TestOriginal {
        id: format!("sine:{a}"),
        description: format!("f(u) = sin({a} u), f^(s) = {a}/(s^2 + {a}^2)"),
        original: TimeOriginal::new(move |u| (a * u).sin(), 0.0),
        image: LaplaceImage::new(move |s| a / (s * s + a * a), 0.0).with_singular_height(a.abs()),
        image_poles: vec![Complex64::new(0.0, a), Complex64::new(0.0, -a)],
        image_decay_order: 2.0,
    }
}

fn unit() -> TestOriginal {
    TestOriginal {
        id: "unit".into(),
        description: "f(u) = 1, f^(s) = 1/s".into(),
        original: TimeOriginal::new(|_| 1.0, 0.0),
        image: LaplaceImage::new(|s| 1.0 / s, 0.0),
        image_poles: vec![Complex64::new(0.0, 0.0)],
        image_decay_order: 1.0,
    }
}

/// The standard catalog in a fixed order.
pub fn catalog_list() -> Vec<TestOriginal> {
    vec![
        exp_decay(0.5),
        exp_decay(1.0),
        exp_decay(2.0),
        poly_exp(1, 1.0),
        poly_exp(2, 1.0),
        sine(1.0),
        unit(),
    ]
}

/// Parses `exp_decay:a`, `poly_exp:n,a`, `sine:a` or `unit`; parameters may be
/// any finite value within the family's domain (`a > 0` for the decaying
/// families, `n <= 20`).
pub fn parse_original(id: &str) -> Result<TestOriginal> {
    let unknown = || Error::UnknownOriginal(id.to_string());
    let number = |text: &str| -> Result<f64> {
        text.trim()
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(unknown)
    };
    let (family, params) = id.split_once(':').unwrap_or((id, ""));
    match family {
        "unit" if params.is_empty() => Ok(unit()),
        "exp_decay" => {
            let a = number(params)?;
            if a <= 0.0 {
                return Err(Error::Domain(format!("exp_decay needs a > 0, got {a}")));
            }
            Ok(exp_decay(a))
        }
        "sine" => {
            let a = number(params)?;
            if a == 0.0 {
                return Err(Error::Domain("sine needs a nonzero frequency".into()));
            }
            Ok(sine(a))
        }
        "poly_exp" => {
            let (n, a) = params.split_once(',').ok_or_else(unknown)?;
            let n: u32 = n.trim().parse().map_err(|_| unknown())?;
            let a = number(a)?;
            if a <= 0.0 || n > 20 {
                return Err(Error::Domain(format!(
                    "poly_exp needs n <= 20 and a > 0, got n={n}, a={a}"
                )));
            }
            Ok(poly_exp(n, a))
        }
        _ => Err(unknown()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn catalog_examples() {
        let f = parse_original("exp_decay:1").unwrap();
        assert_eq!(f.f(0.0), 1.0);
        assert_eq!(f.fhat(c(1.0)), c(0.5));
        assert_eq!(parse_original("unit").unwrap().fhat(c(2.0)), c(0.5));
        assert_eq!(
            parse_original("poly_exp:1,1").unwrap().fhat(c(1.0)),
            c(0.25)
        );
        assert!((parse_original("poly_exp:2,1").unwrap().fhat(c(1.0)).re - 0.25).abs() < 1e-15);
        assert!((parse_original("sine:1").unwrap().fhat(c(1.0)).re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn catalog_ids_parse_back() {
        let list = catalog_list();
        let ids: Vec<&str> = list.iter().map(|f| f.id.as_str()).collect();
        assert_eq!(
            ids,
            [
                "exp_decay:0.5",
                "exp_decay:1",
                "exp_decay:2",
                "poly_exp:1,1",
                "poly_exp:2,1",
                "sine:1",
                "unit"
            ]
        );
        for f in &list {
            assert_eq!(parse_original(&f.id).unwrap().id, f.id);
        }
        for bad in [
            "",
            "exp",
            "exp_decay:",
            "exp_decay:x",
            "poly_exp:1",
            "unit:3",
            "sine:nan",
        ] {
            assert!(parse_original(bad).is_err(), "{bad}");
        }
        assert!(matches!(
            parse_original("exp_decay:-1"),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn images_match_numeric_transforms() {
        let spec = QuadratureSpec::default();
        for f in catalog_list() {
            let dev = f.image_consistency(&spec).unwrap();
            assert!(dev < 1e-9, "{}: {dev:e}", f.id);
        }
    }
}
