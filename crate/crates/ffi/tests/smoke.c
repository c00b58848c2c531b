#include <stdio.h>
#include <string.h>
#include "ulrich.h"

#define CHECK(e) do { if ((e) != ULRICH_STATUS_OK) { fprintf(stderr, "%s: %s\n", #e, ulrich_last_error()); return 1; } } while (0)

int main(void) {
    UlrichRing *r = NULL;
    UlrichPoly *f = NULL, *a = NULL, *b = NULL;
    CHECK(ulrich_ring_new("fp:7", "X,Y", &r));
    CHECK(ulrich_poly_parse(r, "Y^3", &f));
    CHECK(ulrich_poly_parse(r, "X^2 + Y", &a));
    CHECK(ulrich_poly_parse(r, "X*Y", &b));
    const UlrichPoly *gens[2] = {a, b};
    size_t len = 0;
    bool yes = false;
    CHECK(ulrich_colength(gens, 2, &len));
    CHECK(ulrich_is_ulrich(gens, 2, f, &yes));
    char *s = NULL;
    CHECK(ulrich_poly_to_string(a, &s));
    printf("%s %zu %d\n", s, len, (int)yes);
    ulrich_string_free(s);
    UlrichPoly *bad = NULL;
    if (ulrich_poly_parse(r, "X +* Y", &bad) != ULRICH_STATUS_INPUT) return 2;
    ulrich_poly_free(a);
    ulrich_poly_free(b);
    ulrich_poly_free(f);
    ulrich_ring_free(r);
    return 0;
}
