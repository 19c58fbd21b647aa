#include <math.h>
#include <stdio.h>
#include <string.h>

#include "rimix.h"

#define CHECK(cond)                                                   \
    do {                                                              \
        if (!(cond)) {                                                \
            fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
            return 1;                                                 \
        }                                                             \
    } while (0)

int main(void) {
    double ends[] = {0.5, 1.0};
    double values[] = {1.0, 0.0};
    RimixStep *f = NULL;
    RimixSpace *x = NULL;
    CHECK(rimix_step_new(1.0, ends, values, 2, &f) == RIMIX_STATUS_OK);
    CHECK(rimix_space_parse("Lpq:2,1", &x) == RIMIX_STATUS_OK);
    double v = 0.0;
    CHECK(rimix_ri_norm(x, f, &v) == RIMIX_STATUS_OK);
    CHECK(fabs(v - sqrt(2.0)) < 1e-12);

    double cells[] = {1.0, 0.0, 0.0, 0.0};
    RimixGrid *g = NULL;
    RimixSpace *l1 = NULL, *linf = NULL;
    CHECK(rimix_grid_new(2, 2, cells, 4, &g) == RIMIX_STATUS_OK);
    CHECK(rimix_space_parse("L1", &l1) == RIMIX_STATUS_OK);
    CHECK(rimix_space_parse("Linf", &linf) == RIMIX_STATUS_OK);
    CHECK(rimix_mixed_norm(g, l1, linf, -1, &v) == RIMIX_STATUS_OK);
    CHECK(fabs(v - 1.0) < 1e-12);

    RimixSpace *bad = NULL;
    CHECK(rimix_space_parse("Lp:0.5", &bad) == RIMIX_STATUS_INVALID_SPACE);
    CHECK(bad == NULL);
    CHECK(strlen(rimix_last_error()) > 0);

    rimix_space_free(x);
    rimix_space_free(l1);
    rimix_space_free(linf);
    rimix_grid_free(g);
    rimix_step_free(f);
    puts("ok");
    return 0;
}
