# A germ whose discriminant has two polar quotients, hence two vertical zones.

from fractions import Fraction

from vanzone.cli import format_report, parse_polynomial
from vanzone.pipeline import RunConfig, report_dict, run_pipeline
from vanzone.carrousel import build_zone_ladder, classify_zone_membership, ExponentPair

text = "(z - y)*(z^2 - x*y^3)"
result = run_pipeline(RunConfig(parse_polynomial(text), text))
print(format_report(report_dict(result)))

run = result.runs[0]
for z in run.ladder.zones:
    print(z.describe())
print("separator s_1 =", run.ladder.s)

# Zone membership is an exponent comparison: |y| ~ eta^(q/p) * alpha^(e/d')
for pair in run.ladder.pairs():
    idx, cert = classify_zone_membership(pair, run.ladder)
    print(pair, "->", cert)

# The same ladder on synthetic pairs, including two second exponents on one quotient
ladder = build_zone_ladder([(Fraction(3, 2), 0), (Fraction(1, 2), 0), (Fraction(1, 2), Fraction(-1, 2))])
for z in ladder.zones:
    print(z.describe())
print("nu =", ladder.nu)
print(classify_zone_membership(ExponentPair(Fraction(1, 2), Fraction(-1, 2)), ladder)[0])
