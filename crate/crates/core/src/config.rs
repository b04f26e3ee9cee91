//! Domain specification strings.
//!
//! Grammar:
//!
//! ```text
//! spec   := family [ ":" params ]
//! family := "superellipse" | "disk"
//! params := param { "," param }
//! param  := key "=" number
//! key    := "omega" | "a" | "b" | "theta"
//! ```
//!
//! `omega` is required for `superellipse` and must be an even integer ≥ 2;
//! `a`, `b` default to 1 and `theta` to 0. `disk` is `superellipse:omega=2`
//! and accepts `a`, `b`, `theta`. Whitespace around tokens is ignored.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::{RotatedDomain, Superellipse};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainSpec {
    pub omega: u32,
    pub a: f64,
    pub b: f64,
    pub theta: f64,
}

impl DomainSpec {
    pub fn domain(&self) -> Result<RotatedDomain> {
        Ok(RotatedDomain::new(
            Superellipse::new(self.omega, self.a, self.b)?,
            self.theta,
        ))
    }
}

impl FromStr for DomainSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (family, params) = match s.split_once(':') {
            Some((f, p)) => (f.trim(), p),
            None => (s, ""),
        };
        let mut spec = DomainSpec {
            omega: 0,
            a: 1.0,
            b: 1.0,
            theta: 0.0,
        };
        match family {
            "superellipse" => {}
            "disk" => spec.omega = 2,
            other => return Err(Error::Parse(format!("unknown domain family '{other}'"))),
        }
        for param in params.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = param
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got '{param}'")))?;
            let k = k.trim();
            let v = v.trim();
            let num = || {
                v.parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad number '{v}' for '{k}'")))
            };
            match k {
                "omega" => {
                    let w: u32 = v
                        .parse()
                        .map_err(|_| Error::Parse(format!("omega must be an integer, got '{v}'")))?;
                    if family == "disk" && w != 2 {
                        return Err(Error::Parse("disk requires omega=2".into()));
                    }
                    spec.omega = w;
                }
                "a" => spec.a = num()?,
                "b" => spec.b = num()?,
                "theta" => spec.theta = num()?,
                other => return Err(Error::Parse(format!("unknown key '{other}'"))),
            }
        }
        if spec.omega == 0 {
            return Err(Error::Parse("superellipse requires omega".into()));
        }
        Superellipse::new(spec.omega, spec.a, spec.b)
            .map_err(|e| Error::Parse(e.to_string()))?;
        if !spec.theta.is_finite() {
            return Err(Error::Parse("theta must be finite".into()));
        }
        Ok(spec)
    }
}

impl std::fmt::Display for DomainSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "superellipse:omega={},a={},b={},theta={}",
            self.omega, self.a, self.b, self.theta
        )
    }
}
