//! Resolves CLI target specs to matrices: built-in family names, the
//! `onesMxN` pattern, or a path to a matrix JSON file.

use std::path::Path;

use nnrank::constructions::{build_a, build_b, build_c, build_v, m1, m2, m3, m4};
use nnrank::field::{FieldDescriptor, Scalar};
use nnrank::matrix::ExactMatrix;

/// Parses a comma-separated parameter list. Each token uses the scalar
/// grammar; tokens without a sqrt part are rational, the rest live in
/// `Q(sqrt 2)`.
pub fn parse_params(text: &str) -> Result<Vec<Scalar>, String> {
    text.split(',')
        .map(|token| {
            Scalar::parse(token, FieldDescriptor::Rationals)
                .or_else(|_| Scalar::parse(token, FieldDescriptor::Quadratic(2)))
                .map_err(|e| format!("parameter `{token}`: {e}"))
        })
        .collect()
}

fn ones(spec: &str) -> Option<Result<ExactMatrix, String>> {
    let dims = spec.strip_prefix("ones")?;
    let (m, n) = dims.split_once('x')?;
    let m: usize = m.parse().ok()?;
    let n: usize = n.parse().ok()?;
    Some(
        ExactMatrix::from_int_rows(FieldDescriptor::Rationals, &vec![vec![1; n]; m])
            .map_err(|e| e.to_string()),
    )
}

/// Builds the matrix named by `spec`.
///
/// Known names: `A`, `V`, `M1`, `M2`, `M3`, `M4` (no parameters), `B` (one
/// or more parameters), `C` (exactly five parameters), and `onesMxN`.
/// Anything else is treated as a path to a matrix JSON file.
pub fn resolve_target(spec: &str, params: Option<&str>) -> Result<ExactMatrix, String> {
    let reject_params = |matrix: ExactMatrix| -> Result<ExactMatrix, String> {
        match params {
            Some(_) => Err(format!("target `{spec}` takes no parameters")),
            None => Ok(matrix),
        }
    };
    match spec.to_ascii_uppercase().as_str() {
        "A" => return reject_params(build_a()),
        "V" => return reject_params(build_v()),
        "M1" => return reject_params(m1()),
        "M2" => return reject_params(m2()),
        "M3" => return reject_params(m3()),
        "M4" => return reject_params(m4()),
        "B" => {
            let params = params.ok_or("target `B` needs --params a1,a2,...")?;
            let alphas = parse_params(params)?;
            return build_b(&alphas).map_err(|e| e.to_string());
        }
        "C" => {
            let params = params.ok_or("target `C` needs --params a1,a2,b,c,d")?;
            let values = parse_params(params)?;
            let [a1, a2, b, c, d]: [Scalar; 5] = values
                .try_into()
                .map_err(|v: Vec<Scalar>| format!("target `C` needs 5 parameters, got {}", v.len()))?;
            return build_c(&a1, &a2, &b, &c, &d).map_err(|e| e.to_string());
        }
        _ => {}
    }
    if let Some(result) = ones(spec) {
        return result.and_then(reject_params);
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(format!(
            "`{spec}` is neither a known target name nor an existing file"
        ));
    }
    let text = std::fs::read_to_string(path).map_err(|e| format!("reading {spec}: {e}"))?;
    ExactMatrix::from_json(&text).map_err(|e| format!("parsing {spec}: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_targets_resolve() {
        assert_eq!(resolve_target("A", None).unwrap().rows(), 21);
        assert_eq!(resolve_target("v", None).unwrap().rows(), 4);
        assert_eq!(resolve_target("M2", None).unwrap().cols(), 6);
        assert_eq!(resolve_target("ones4x7", None).unwrap().cols(), 7);
        assert!(resolve_target("A", Some("1")).is_err());
        assert!(resolve_target("nope", None).is_err());
    }

    #[test]
    fn parameterized_targets() {
        let c = resolve_target("C", Some("1,1,1,1,1")).unwrap();
        assert_eq!((c.rows(), c.cols()), (5, 5));
        assert_eq!(c.field(), FieldDescriptor::Rationals);

        let b = resolve_target("B", Some("1/2, 1/2, 1/2")).unwrap();
        assert_eq!((b.rows(), b.cols()), (5, 7));

        let quad = resolve_target("B", Some("2-1*sqrt(2)")).unwrap();
        assert_eq!(quad.field(), FieldDescriptor::Quadratic(2));

        assert!(resolve_target("C", Some("1,1,1")).is_err());
        assert!(resolve_target("B", None).is_err());
        assert!(resolve_target("C", Some("1,1,1,1,-1")).is_err());
    }
}
