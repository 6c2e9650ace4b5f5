//! WebAssembly bindings for a one-page demo: summarise a pyramid, list the
//! generators of its W-algebra, and run a relation suite.
//!
//! Each exported function takes plain strings and returns a JSON string; the
//! same functions are available natively through [`demo`].

use wasm_bindgen::prelude::*;

pub mod demo {
    //! The demo operations, independent of the JavaScript boundary.

    use yw_core::json::{to_pretty, ElementJson};
    use yw_core::pyramid::parse_list;
    use yw_core::relations::{check_invariance, check_truncation};
    use yw_core::{Invariants, Pyramid, Relations, Shape};

    /// Largest supported brick count; keeps browser runs interactive.
    pub const MAX_BRICKS: usize = 6;

    fn pyramid(q: &str) -> Result<Pyramid, String> {
        let p = Pyramid::from_heights(&parse_list(q).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        if p.big_n() > MAX_BRICKS {
            return Err(format!("the demo is limited to {MAX_BRICKS} bricks, got {}", p.big_n()));
        }
        Ok(p)
    }

    fn shape(p: &Pyramid, s: &str) -> Result<Shape, String> {
        let sigma = p.shift_matrix().map_err(|e| e.to_string())?;
        let nu = match s.trim() {
            "" | "ones" => Shape::ones(p.n()),
            "minimal" => sigma.minimal_shape(),
            list => Shape::new(parse_list(list).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?,
        };
        sigma.check_admissible(&nu).map_err(|e| e.to_string())?;
        Ok(nu)
    }

    /// Shift matrix, row lengths, admissible shapes and centralizer size.
    pub fn pyramid_summary(q: &str) -> Result<String, String> {
        let p = pyramid(q)?;
        let sigma = p.shift_matrix().map_err(|e| e.to_string())?;
        let shapes: Vec<Vec<usize>> = sigma.admissible_shapes().iter().map(|s| s.parts().to_vec()).collect();
        let doc = format!(
            "{{\"q\":{:?},\"p\":{:?},\"sigma\":{:?},\"minimal_shape\":{:?},\"admissible_shapes\":{:?},\"centralizer_count\":{}}}",
            p.q(),
            p.p(),
            sigma.rows(),
            sigma.minimal_shape().parts(),
            shapes,
            sigma.centralizer_index_set(p.p()).len()
        );
        Ok(doc)
    }

    /// Generators `D`, `D̃`, `E`, `F` up to order `k`, each written as a
    /// readable sum of PBW monomials.
    pub fn generators(q: &str, shape_arg: &str, k: usize) -> Result<String, String> {
        let p = pyramid(q)?;
        let nu = shape(&p, shape_arg)?;
        let k = k.clamp(1, 6);
        let inv = Invariants::new(p, k).map_err(|e| e.to_string())?;
        let tab = inv.generators_direct(&nu).map_err(|e| e.to_string())?;
        let mut lines = Vec::new();
        for (key, x) in tab.entries() {
            let e = ElementJson::encode(inv.algebra(), x);
            let terms: Vec<String> = e
                .terms
                .iter()
                .map(|t| {
                    let m: Vec<String> = t.m.iter().map(|[i, j]| format!("e{i},{j}")).collect();
                    let c = if t.c.is_integer() { t.c.numer().to_string() } else { t.c.to_string() };
                    match (m.is_empty(), c.as_str()) {
                        (true, _) => c,
                        (false, "1") => m.join(" "),
                        (false, "-1") => format!("-{}", m.join(" ")),
                        (false, _) => format!("{c} {}", m.join(" ")),
                    }
                })
                .collect();
            let body = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
            lines.push(format!("{}_{{{};{},{}}}^({}) = {body}", key.kind, key.a, key.i, key.j, key.r));
        }
        Ok(lines.join("\n"))
    }

    /// Runs one suite (`relations`, `parabolic`, `invariance` or
    /// `truncation`) and returns the JSON report.
    pub fn verify(q: &str, shape_arg: &str, suite: &str, k: usize) -> Result<String, String> {
        let p = pyramid(q)?;
        let nu = shape(&p, shape_arg)?;
        let k = k.clamp(1, 6);
        let inv = Invariants::new(p.clone(), k).map_err(|e| e.to_string())?;
        let alg = inv.algebra();
        let err = |e: yw_core::YwError| e.to_string();
        let rep = match suite {
            "relations" => {
                let tab = inv.generators_direct(&Shape::ones(p.n())).map_err(err)?;
                Relations::new(alg, &tab, None).map_err(err)?.defining().map_err(err)?
            }
            "parabolic" => {
                let tab = inv.generators_direct(&nu).map_err(err)?;
                Relations::new(alg, &tab, None).map_err(err)?.parabolic().map_err(err)?
            }
            "invariance" => check_invariance(alg, &inv.generators_direct(&nu).map_err(err)?).map_err(err)?,
            "truncation" => check_truncation(alg, &inv.generators_direct(&nu).map_err(err)?, p.p()[0]),
            other => return Err(format!("unknown suite {other:?}")),
        };
        Ok(to_pretty(&rep))
    }

    #[cfg(test)]
    mod tests {
        use super::*;

        #[test]
        fn demo_operations() {
            let s = pyramid_summary("1,2").unwrap();
            assert!(s.contains("\"p\":[1, 2]") || s.contains("\"p\":[1,2]"), "{s}");
            assert!(pyramid_summary("2,1,2").unwrap_err().contains("NotUnimodal"));
            assert!(pyramid_summary("3,3,1").unwrap_err().contains("limited"));
            let g = generators("1,2", "ones", 2).unwrap();
            assert!(g.contains("D_{1;1,1}^(1) = e2,2\n"), "{g}");
            assert!(g.contains("D_{2;1,1}^(1) = -1 + e1,1 + e3,3\n"), "{g}");
            let r = verify("1,2", "ones", "relations", 4).unwrap();
            assert!(r.contains("\"fail\": 0"), "{r}");
            assert!(verify("1,2", "2,1", "parabolic", 4).is_err());
            assert!(verify("1,2", "ones", "bogus", 4).is_err());
        }
    }
}

fn js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

/// JSON summary of the pyramid with column heights `q` (e.g. `"1,2"`).
#[wasm_bindgen]
pub fn pyramid_summary(q: &str) -> Result<String, JsValue> {
    js(demo::pyramid_summary(q))
}

/// Generator table, one generator per line.
#[wasm_bindgen]
pub fn generators(q: &str, shape: &str, k: usize) -> Result<String, JsValue> {
    js(demo::generators(q, shape, k))
}

/// JSON report of one relation suite.
#[wasm_bindgen]
pub fn verify(q: &str, shape: &str, suite: &str, k: usize) -> Result<String, JsValue> {
    js(demo::verify(q, shape, suite, k))
}
