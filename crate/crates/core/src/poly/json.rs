use serde::{Deserialize, Serialize};

use crate::arith::Field;

use super::{Monomial, PolyError, Polynomial, VariableTable};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarJson {
    pub name: String,
    pub weight: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub coeff: String,
}

/// Serialized polynomial; terms appear in canonical descending grevlex order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub vars: Vec<VarJson>,
    pub field: String,
    pub terms: Vec<TermJson>,
}

impl<F: Field> Polynomial<F> {
    pub fn to_json(&self) -> PolyJson {
        let t = self.table();
        PolyJson {
            vars: t
                .names()
                .iter()
                .zip(t.weights())
                .map(|(n, &w)| VarJson { name: n.clone(), weight: w })
                .collect(),
            field: F::tag(self.ctx()),
            terms: self
                .canonical_terms()
                .into_iter()
                .map(|(m, c)| TermJson { exp: m.0.clone(), coeff: c.to_string() })
                .collect(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("polynomial JSON is always serializable")
    }

    pub fn from_json(doc: &PolyJson) -> Result<Self, PolyError> {
        let names: Vec<&str> = doc.vars.iter().map(|v| v.name.as_str()).collect();
        let weights: Vec<u32> = doc.vars.iter().map(|v| v.weight).collect();
        let table = VariableTable::new(&names, &weights)?;
        let ctx = F::parse_tag(&doc.field)?;
        let mut p = Polynomial::zero(&table, &ctx);
        for t in &doc.terms {
            if t.exp.len() != table.len() {
                return Err(PolyError::InvalidInput("exponent vector length differs from variable count".into()));
            }
            let c = F::parse(&ctx, &t.coeff)?;
            if c.is_zero() {
                return Err(PolyError::InvalidInput("zero coefficient in serialized polynomial".into()));
            }
            p.add_term(Monomial(t.exp.clone()), c);
        }
        Ok(p)
    }

    pub fn from_json_str(s: &str) -> Result<Self, PolyError> {
        let doc: PolyJson = serde_json::from_str(s).map_err(|e| PolyError::InvalidInput(e.to_string()))?;
        Self::from_json(&doc)
    }
}

#[cfg(test)]
mod tests {
    use crate::arith::{Fp, NfElem, NumberField, PrimeField, Rational};
    use crate::poly::{Polynomial, VariableTable};

    #[test]
    fn round_trips() {
        let t = VariableTable::indexed("c", 3, 2);
        let f = Polynomial::<Rational>::from_int_terms(&t, &(), &[(&[3, 0, 0], 2), (&[1, 1, 0], -9), (&[0, 0, 1], 27)]);
        let s = f.to_json_string();
        assert_eq!(
            s,
            r#"{"vars":[{"name":"c1","weight":2},{"name":"c2","weight":4},{"name":"c3","weight":6}],"field":"Q","terms":[{"exp":[3,0,0],"coeff":"2"},{"exp":[1,1,0],"coeff":"-9"},{"exp":[0,0,1],"coeff":"27"}]}"#
        );
        let back = Polynomial::<Rational>::from_json_str(&s).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.to_json_string(), s);

        let f2 = PrimeField::new(2).unwrap();
        let g = Polynomial::<Fp>::from_int_terms(&t, &f2, &[(&[1, 1, 0], 1)]);
        let s = g.to_json_string();
        assert!(s.contains("\"1 mod 2\""));
        assert_eq!(Polynomial::<Fp>::from_json_str(&s).unwrap().to_json_string(), s);

        let k = NumberField::sqrt_minus_7();
        let xy = VariableTable::uniform(&["x", "y"]);
        let h = Polynomial::<NfElem>::from_terms(&xy, &k, [(vec![1, 0], k.generator()), (vec![0, 2], k.elem_ints(&[3, -1]))]);
        let s = h.to_json_string();
        assert!(s.contains("Q[t]/(7,0,1)"));
        assert_eq!(Polynomial::<NfElem>::from_json_str(&s).unwrap(), h);
    }

    #[test]
    fn rejects_malformed() {
        assert!(Polynomial::<Rational>::from_json_str(r#"{"vars":[{"name":"x","weight":1}],"field":"F_2","terms":[]}"#).is_err());
        assert!(Polynomial::<Rational>::from_json_str(
            r#"{"vars":[{"name":"x","weight":1}],"field":"Q","terms":[{"exp":[1,2],"coeff":"1"}]}"#
        )
        .is_err());
    }
}
