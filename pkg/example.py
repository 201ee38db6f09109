# example.py

from sinkhornpoly import (
    ExactMatrix, KruithofTargets, builtin_table, certified, conjectured_coefficient,
    enumerate_classes, kruithof_limit, minimal_polynomial, polynomial_for,
    sinkhorn_limit, table_identities, MinorSet
)

MATRIX = ExactMatrix.from_rows([[3, 9, 1], [3, 2, 9], [5, 3, 4]])

TRAFFIC = ExactMatrix.from_rows(
    [
        [2000, 1030, 650, 320],
        [1080, 1110, 555, 255],
        [720, 580, 500, 200],
        [350, 280, 210, 160]
    ]
)
TARGETS = KruithofTargets(rows=(6000, 4000, 2500, 1000), columns=(6225, 4000, 2340, 935))

PRECISION = 512

def main() -> None:
    """Tests the program."""

    limit = certified(MATRIX, PRECISION)

    print("limit:", limit.top_left.format(27), f"({limit.certified_digits} digits)")

    recognized = minimal_polynomial(
        limit.top_left, 6,
        refine=lambda bits: sinkhorn_limit(MATRIX, bits).top_left.value
    )

    print("recognized:", recognized.poly)

    table = builtin_table(3, 3)
    exact = polynomial_for(MATRIX, table)

    print("table:", exact.primitive, "scale", exact.exact.leading // exact.primitive.leading)

    for check in table_identities(table):
        print("identity:", check.name, check.passed)

    print("classes:", [len(enumerate_classes(3, 3, k)) for k in range(7)])
    print(
        "conjectured:",
        conjectured_coefficient(MinorSet.of("{};{}", "{2};{2}"), 4, 5).dump()
    )

    traffic = kruithof_limit(TRAFFIC, TARGETS, 256)

    print("kruithof:", traffic.top_left.format(15))

if __name__ == '__main__':
    main()
