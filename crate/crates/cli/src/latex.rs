use fkdv::closedform::{ParamValue, SolutionRecord};
use fkdv::exactpoly::latex_rat;
use fkdv::pre_method::PreEquation;
use fkdv::tanh_method::TanhEquation;

fn align(rows: Vec<(String, String)>) -> String {
    let mut out = String::from("\\begin{align*}\n");
    let n = rows.len();
    for (i, (tag, poly)) in rows.into_iter().enumerate() {
        out.push_str(&format!("  &{poly} = 0 \\tag{{{tag}}}"));
        out.push_str(if i + 1 < n { " \\\\\n" } else { "\n" });
    }
    out.push_str("\\end{align*}\n");
    out
}

pub fn tanh_system(system: &[TanhEquation]) -> String {
    align(
        system
            .iter()
            .enumerate()
            .map(|(n, e)| (format!("{}", n + 1), e.poly.latex()))
            .collect(),
    )
}

pub fn pre_system(system: &[PreEquation]) -> String {
    align(
        system
            .iter()
            .enumerate()
            .map(|(n, e)| (format!("{}", n + 1), e.poly.latex()))
            .collect(),
    )
}

fn param(v: &ParamValue) -> String {
    match v {
        ParamValue::Fixed(c) => latex_rat(c),
        ParamValue::Scaled(c) => {
            let root = "\\sqrt{-\\dfrac{\\lambda}{6}}";
            match latex_rat(c).as_str() {
                "1" => root.to_string(),
                "-1" => format!("-{root}"),
                s => format!("{s}{root}"),
            }
        }
    }
}

pub fn solutions(records: &[SolutionRecord]) -> String {
    let mut out = String::new();
    for r in records {
        let params: Vec<String> = r.params.iter().map(|(s, v)| format!("${} = {}$", s.latex(), param(v))).collect();
        out.push_str(&format!("\\textbf{{{}.}} {}\n", r.anchor, params.join(", ")));
        out.push_str(&format!(
            "\\begin{{equation*}}\n  u_{{{}}}(x,t) = {}\n\\end{{equation*}}\n",
            r.id.index(),
            r.template.latex()
        ));
    }
    out
}
