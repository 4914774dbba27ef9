//! Hand-transcribed stencil tables and a comparator against certificates.

use laurent::cyclic::CyclicSpec;
use laurent::stencil::{point_name, verify_stencil, StencilCertificate, StencilRecurrence};
use laurent::{LaurentPoly, VarSpace};

/// Class letters around `a`, as offsets from `a`.
pub type Letters = &'static [(&'static str, [i64; 3])];

pub const KNIGHT: Letters = &[
    ("b", [0, -1, 0]),
    ("c", [-1, 0, 0]),
    ("e", [-1, -1, 0]),
    ("f", [-2, 0, 0]),
    ("g", [1, -1, 0]),
    ("d", [2, -1, 0]),
    ("p", [-3, 0, 0]),
    ("q", [-4, 0, 0]),
];

pub const CUBE: Letters = &[
    ("b", [0, 0, -1]),
    ("c", [0, -1, 0]),
    ("d", [-1, 0, 0]),
    ("e", [0, -1, -1]),
    ("f", [-1, 0, -1]),
    ("g", [-1, -1, 0]),
    ("q", [0, -1, -2]),
    ("p", [-1, 0, -2]),
    ("r", [0, -2, -1]),
    ("s", [-1, -2, 0]),
    ("v", [-2, 0, -1]),
    ("u", [-2, -1, 0]),
];

pub const OCTAHEDRON: Letters = &[
    ("b", [0, 1, -1]),
    ("c", [1, 0, -1]),
    ("d", [-1, 0, -1]),
    ("e", [0, -1, -1]),
    ("p", [-1, 1, 0]),
    ("q", [1, 1, 0]),
    ("r", [1, -1, 0]),
    ("s", [-1, -1, 0]),
];

pub const FRIEZE: Letters = &[("b", [-1, 0, 0]), ("c", [0, -1, 0])];

pub const WALL: Letters = &[
    ("d", [-1, -1, 0]),
    ("c", [0, -1, 0]),
    ("b", [1, -1, 0]),
    ("g", [-1, -2, 0]),
    ("f", [1, -2, 0]),
];

pub struct Table<'a> {
    stencil: &'a StencilRecurrence,
    pub cert: StencilCertificate,
    letters: Letters,
}

impl<'a> Table<'a> {
    pub fn new(stencil: &'a StencilRecurrence, letters: Letters) -> Self {
        let cert = verify_stencil(stencil, 17, 8).unwrap();
        Table { stencil, cert, letters }
    }

    pub fn class(&self, letter: &str) -> String {
        let d = self.stencil.dim();
        let (_, o) = self.letters.iter().find(|(l, _)| *l == letter).unwrap();
        let rep = self.stencil.representative(&o[..d]).unwrap();
        point_name("x", &rep)
    }

    /// `text` with `x_b`-style letters replaced by class variable names.
    pub fn poly(&self, text: &str) -> LaurentPoly {
        let mut out = String::new();
        let mut rest = text;
        while let Some(i) = rest.find("x_") {
            out.push_str(&rest[..i]);
            let letter = &rest[i + 2..i + 3];
            out.push_str(&self.class(letter));
            rest = &rest[i + 3..];
        }
        out.push_str(rest);
        LaurentPoly::parse(&out, self.cert.p_a.space()).unwrap()
    }

    /// Essential steps as (class letter, Q, G) must match `rows` in order,
    /// up to sign. Rows whose G equals the previous G (possible when an
    /// exponent is zero) are expected to be non-essential and are dropped.
    pub fn compare(&self, p_a: &str, rows: &[(&str, &str, &str)]) -> Result<(), String> {
        if !self.cert.passed() {
            return Err(format!("verdict {:?}", self.cert.verdict));
        }
        let p_a = self.poly(p_a);
        if self.cert.p_a != p_a {
            return Err(format!("P_a = {}, expected {p_a}", self.cert.p_a));
        }
        let mut expected = Vec::new();
        let mut prev = p_a;
        for (letter, q, g) in rows {
            let g = self.poly(g);
            if !g.eq_up_to_sign(&prev) {
                expected.push((*letter, self.poly(q), g.clone()));
            }
            prev = g;
        }
        let essential: Vec<_> = self.cert.essential_steps().collect();
        if essential.len() != expected.len() {
            return Err(format!("{} essential steps, expected {}", essential.len(), expected.len()));
        }
        for (step, (letter, q, g)) in essential.iter().zip(&expected) {
            if step.class != self.class(letter) {
                return Err(format!("step at {}, expected {letter}", step.class));
            }
            if !step.q.eq_up_to_sign(q) {
                return Err(format!("Q at {letter} is {}, expected {q}", step.q));
            }
            if !step.g.eq_up_to_sign(g) {
                return Err(format!("G at {letter} is {}, expected {g}", step.g));
            }
        }
        if let Some(s) = self.cert.steps.iter().find(|s| !s.essential && s.skip_reason.is_none()) {
            return Err(format!("skipped step at {} has no reason", s.class));
        }
        Ok(())
    }

    pub fn check(&self, p_a: &str, rows: &[(&str, &str, &str)]) {
        if let Err(e) = self.compare(p_a, rows) {
            panic!("{e}\n{}", self.cert);
        }
    }
}

/// The number-wall table with exponents filled in.
pub fn number_wall_rows(p: u32, q: u32, r: u32) -> (String, Vec<(&'static str, String, String)>) {
    (
        format!("x_d^{p}*x_b^{r} + x_c^{q}"),
        vec![
            ("b", format!("x_f^{q}"), format!("x_d^{p}*x_f^{} + x_c^{q}*x_b^{r}", q * r)),
            ("c", format!("x_g^{p}*x_f^{r}"), format!("x_d^{p}*x_c^{q} + x_g^{}*x_b^{r}", p * q)),
            ("d", format!("x_g^{q}"), format!("x_c^{q} + x_b^{r}*x_d^{p}")),
        ],
    )
}

/// A transcribed table: `P_a` and rows `(letter, Q, G)` in step order.
pub struct Golden {
    pub name: String,
    pub stencil: StencilRecurrence,
    pub letters: Letters,
    pub p_a: String,
    pub rows: Vec<(&'static str, String, String)>,
}

impl Golden {
    fn new(name: &str, stencil: StencilRecurrence, letters: Letters, p_a: &str, rows: &[(&'static str, &str, &str)]) -> Self {
        Golden {
            name: name.to_string(),
            stencil,
            letters,
            p_a: p_a.to_string(),
            rows: rows.iter().map(|&(l, q, g)| (l, q.to_string(), g.to_string())).collect(),
        }
    }

    pub fn table(&self) -> Table<'_> {
        Table::new(&self.stencil, self.letters)
    }

    pub fn rows(&self) -> Vec<(&str, &str, &str)> {
        self.rows.iter().map(|(l, q, g)| (*l, q.as_str(), g.as_str())).collect()
    }

    pub fn compare(&self) -> Result<(), String> {
        self.table().compare(&self.p_a, &self.rows())
    }
}

pub fn knight() -> Golden {
    Golden::new(
        "knight",
        StencilRecurrence::knight(),
        KNIGHT,
        "beta*x_c*x_e + alpha*x_b*x_f",
        &[
            ("b", "beta*x_e*x_g", "alpha*x_g*x_f + x_b*x_c"),
            ("c", "alpha*x_e*x_p", "x_c*x_g*x_f + x_b*x_e*x_p"),
            ("e", "alpha*x_c*x_g", "x_f*x_e + alpha*x_b*x_p"),
            ("f", "beta*x_c*x_p", "beta*x_c*x_e + alpha*x_b*x_f"),
        ],
    )
}

pub fn cube() -> Golden {
    Golden::new(
        "cube",
        StencilRecurrence::cube(),
        CUBE,
        "alpha*x_d*x_e + beta*x_c*x_f + gamma*x_b*x_g",
        &[
            (
                "b",
                "alpha*x_f*x_q + beta*x_e*x_p",
                "alpha*x_b*x_d*x_e + beta*x_b*x_c*x_f + alpha*gamma*x_f*x_g*x_q + beta*gamma*x_e*x_g*x_p",
            ),
            (
                "c",
                "alpha*x_g*x_r + gamma*x_e*x_s",
                "alpha*x_b*x_c*x_d*x_e + alpha*beta*x_b*x_f*x_g*x_r + beta*gamma*x_b*x_e*x_f*x_s \
                 + alpha*gamma*x_c*x_f*x_g*x_q + beta*gamma*x_c*x_e*x_g*x_p",
            ),
            (
                "d",
                "beta*x_g*x_v + gamma*x_f*x_u",
                "alpha*beta*x_b*x_c*x_e*x_g*x_v + alpha*gamma*x_b*x_c*x_e*x_f*x_u \
                 + beta*gamma*x_b*x_d*x_e*x_f*x_s + beta*gamma*x_c*x_d*x_e*x_g*x_p \
                 + alpha*beta*x_b*x_d*x_f*x_g*x_r + alpha*gamma*x_c*x_d*x_f*x_g*x_q",
            ),
            (
                "e",
                "beta*x_b*x_r + gamma*x_c*x_q",
                "alpha*gamma*x_b*x_c*x_f*x_u + beta*gamma*x_b*x_d*x_f*x_s + alpha*x_d*x_e*x_f*x_g \
                 + alpha*beta*x_b*x_c*x_g*x_v + beta*gamma*x_c*x_d*x_g*x_p",
            ),
            (
                "f",
                "alpha*x_b*x_v + gamma*x_d*x_p",
                "alpha*x_d*x_e*x_g + beta*x_c*x_f*x_g + alpha*gamma*x_b*x_c*x_u + beta*gamma*x_b*x_d*x_s",
            ),
            ("g", "alpha*x_c*x_u + beta*x_d*x_s", "alpha*x_d*x_e + beta*x_c*x_f + gamma*x_b*x_g"),
        ],
    )
}

pub fn octahedron() -> Golden {
    Golden::new(
        "octahedron",
        StencilRecurrence::octahedron(),
        OCTAHEDRON,
        "alpha*x_c*x_d + beta*x_b*x_e",
        &[
            ("b", "alpha*x_p*x_q", "x_b*x_c*x_d + beta*x_e*x_p*x_q"),
            ("c", "beta*x_q*x_r", "x_b*x_d*x_r + x_c*x_e*x_p"),
            ("d", "beta*x_p*x_s", "beta*x_b*x_r*x_s + x_c*x_d*x_e"),
            ("e", "alpha*x_r*x_s", "beta*x_b*x_e + alpha*x_c*x_d"),
        ],
    )
}

pub fn frieze(negative: bool) -> Golden {
    let eps = if negative { "-" } else { "" };
    let name = if negative { "frieze-minus" } else { "frieze-plus" };
    Golden::new(
        name,
        StencilRecurrence::frieze(negative),
        FRIEZE,
        &format!("{eps}x_b*x_c + beta"),
        &[("b", "beta", &format!("{eps}x_c + x_b")), ("c", "beta", &format!("beta + {eps}x_b*x_c"))],
    )
}

pub fn number_wall(p: u32, q: u32, r: u32) -> Golden {
    let (p_a, rows) = number_wall_rows(p, q, r);
    let rows: Vec<(&'static str, &str, &str)> = rows.iter().map(|(a, b, c)| (*a, b.as_str(), c.as_str())).collect();
    Golden::new(&format!("number-wall({p},{q},{r})"), StencilRecurrence::number_wall(p, q, r), WALL, &p_a, &rows)
}

/// Tables with fixed exponents; the number wall appears at (2, 1, 3).
pub fn paper_tables() -> Vec<Golden> {
    vec![knight(), cube(), octahedron(), frieze(false), frieze(true), number_wall(2, 1, 3)]
}

/// Pairs the paper asserts coprime: each `(G_{m-1}, Q_m)` of the stencil
/// tables with non-monomial entries, the three-variable cyclic table at
/// `(a, b, c) = (2, 3, 1)`, and the small textbook pair.
pub fn coprime_pairs() -> Vec<(String, LaurentPoly, LaurentPoly)> {
    let mut out = Vec::new();
    for g in paper_tables() {
        let t = g.table();
        for (letter, q, row) in g.rows() {
            out.push((format!("{} at {letter}", g.name), t.poly(row), t.poly(q)));
        }
    }
    let k = knight();
    let t = k.table();
    out.push(("knight G_l, Q_l".into(), t.poly("alpha*x_g*x_f + x_b*x_c"), t.poly("alpha*x_e*x_p")));
    let spec = CyclicSpec::parse(4, "x1^2*x3 + x2^3", &[]).unwrap();
    let p = |s: &str| LaurentPoly::parse(s, spec.space()).unwrap();
    out.push(("cyclic G2, Q3".into(), p("x1^5 + x2^3*x3"), p("x1^3")));
    out.push(("cyclic G1, Q2".into(), p("x1^2*x2^3 + x3^7"), p("x1*x3^2")));
    out.push(("cyclic G0, Q1".into(), p("x1^2*x3 + x2^3"), p("x3^3")));
    let s = VarSpace::indexed("x", 2, &[]).unwrap();
    out.push((
        "x + y, x - y".into(),
        LaurentPoly::parse("x1 + x2", &s).unwrap(),
        LaurentPoly::parse("x1 - x2", &s).unwrap(),
    ));
    out
}
