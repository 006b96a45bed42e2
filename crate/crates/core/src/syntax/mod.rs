//! Literal grammars for series, σ-polynomials, Laurent polynomials and
//! `ℤ[σ, σ⁻¹]` elements, all sharing one expression parser.
//!
//! Printing any of these values and parsing the output gives the value back.

mod eval;
mod parser;

pub use eval::{
    parse_cyclo, parse_group_vector, parse_laurent, parse_laurent_in, parse_series, parse_sigma_poly, parse_zsigma,
};
pub use parser::{parse_expr, split_list, split_matrix, Exponent, Expr, ExprKind};

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use num_rational::BigRational;

    use super::*;
    use crate::algebra::{CycloField, GroupAut, GroupVector};
    use crate::error::Error;
    use crate::hahn::Model;
    use crate::scalar::Scalar;

    type Q = BigRational;

    fn pc() -> Arc<Model<Q>> {
        Arc::new(Model::puiseux_conjugate())
    }

    #[test]
    fn cyclo_literals() {
        let f = CycloField::new(4, 3).unwrap();
        let x: crate::algebra::CycloElement<Q> = parse_cyclo(&f, "1/2 - 3*i").unwrap();
        assert_eq!(f.format(&x), "1/2 - 3*i");
        assert_eq!(parse_cyclo::<Q>(&f, "i^2").unwrap(), f.rational(Q::from_int(-1)));
        assert_eq!(parse_cyclo::<Q>(&f, "s(i)").unwrap(), f.neg(&f.imag_unit().unwrap()));
        let f8 = CycloField::new(8, 1).unwrap();
        assert_eq!(parse_cyclo::<Q>(&f8, "i").unwrap(), f8.zeta_pow(2));
        assert!(matches!(parse_cyclo::<Q>(&CycloField::new(3, 2).unwrap(), "i"), Err(Error::Parse { .. })));
    }

    #[test]
    fn series_literals() {
        let ctx = pc();
        let s = parse_series(&ctx, "1 + i*t^(1/2) - t^2 + O(t^3)").unwrap();
        assert_eq!(s.to_string(), "1 + i*t^(1/2) - t^2 + O(t^3)");
        assert_eq!(parse_series(&ctx, "s(i*t^(1/2))").unwrap().to_string(), "-i*t");
        assert_eq!(parse_series(&ctx, "1/(1 - t + O(t^3))").unwrap().to_string(), "1 + t + t^2 + O(t^3)");
        assert_eq!(parse_series(&ctx, "O(1)").unwrap().to_string(), "O(1)");
        assert!(matches!(parse_series(&ctx, "t^(1,2)"), Err(Error::Parse { .. })));
        assert!(matches!(parse_series(&ctx, "x"), Err(Error::Parse { .. })));
        let rank2 = Arc::new(Model::new(CycloField::new(4, 3).unwrap(), GroupAut::<Q>::identity(2)));
        let s = parse_series(&rank2, "t^(1,-2) + 3*t^(0,1)").unwrap();
        assert_eq!(s.valuation().unwrap(), GroupVector::from_ints(&[0, 1]));
        assert!(matches!(parse_series(&rank2, "t"), Err(Error::Parse { .. })));
    }

    #[test]
    fn sigma_poly_literals() {
        let ctx = pc();
        let g = parse_sigma_poly(&ctx, "s^2(x)^3*x + s(x)").unwrap();
        assert_eq!(g.complexity().unwrap().to_string(), "(2, 3, 4)");
        let g = parse_sigma_poly(&ctx, "x*s(x) - (1 + t)").unwrap();
        assert_eq!(g.to_string(), "-1 - t + x*s(x)");
        assert_eq!(parse_sigma_poly(&ctx, &g.to_string()).unwrap(), g);
        let h = parse_sigma_poly(&ctx, "s(x*x + i) / 2").unwrap();
        assert_eq!(h.to_string(), "-1/2*i + 1/2*s(x)^2");
    }

    #[test]
    fn laurent_literals() {
        let ctx = pc();
        let f = parse_laurent(&ctx, "x^2 - (1+t)*x + t").unwrap();
        assert_eq!(f.nvars(), 1);
        assert_eq!(parse_laurent(&ctx, &f.to_string()).unwrap(), f);
        let g = parse_laurent(&ctx, "y1^2*y2^-1 - t^(1/2)*y3").unwrap();
        assert_eq!(g.nvars(), 3);
        assert_eq!(g.to_string(), "-t^(1/2)*y3 + y1^2*y2^-1");
        assert_eq!(parse_laurent(&ctx, &g.to_string()).unwrap(), g);
        assert!(parse_laurent(&ctx, "x + y1").is_err());
        assert!(parse_laurent(&ctx, "(x + 1)^-1").is_err());
    }

    #[test]
    fn zsigma_literals() {
        for src in ["1 - s", "1 - s^2", "2 + s^-1", "(1 - s)*(1 + s)", "-3*s^2 + s"] {
            let p = parse_zsigma(src).unwrap();
            assert_eq!(parse_zsigma(&p.to_string()).unwrap(), p);
        }
        assert_eq!(parse_zsigma("(1 - s)*(1 + s)").unwrap().to_string(), "1 - s^2");
        assert!(parse_zsigma("s(1)").is_err());
        assert!(parse_zsigma("1/s").is_err());
    }

    #[test]
    fn group_vectors() {
        assert_eq!(parse_group_vector::<Q>("1/2").unwrap(), GroupVector::scalar(Q::ratio(1, 2)));
        assert_eq!(parse_group_vector::<Q>("(1,-2)").unwrap(), GroupVector::from_ints(&[1, -2]));
        assert_eq!(parse_group_vector::<Q>("inf").unwrap(), GroupVector::Infinity);
        assert!(parse_group_vector::<Q>("x").is_err());
    }
}
