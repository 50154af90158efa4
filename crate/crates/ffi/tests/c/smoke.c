#include <math.h>
#include <stdio.h>
#include "tempgibbs.h"

static int fail(const char *what) {
    const char *msg = tg_last_error();
    fprintf(stderr, "%s: %s\n", what, msg ? msg : "(no message)");
    return 1;
}

int main(void) {
    TgGraph *g = NULL;
    if (tg_graph_generate("grid:3x3", &g) != TG_STATUS_OK) return fail("generate");
    size_t deg = 0;
    if (tg_graph_degree(g, 4, &deg) != TG_STATUS_OK || deg != 4) return fail("degree");
    size_t radii[] = {1, 2};
    TgTemperedness t;
    if (tg_check_tempered(g, TG_GROWTH_LOG, 4, radii, 2, NAN, 0, &t) != TG_STATUS_OK) return fail("tempered");
    size_t vol[] = {1, 3, 4, 5, 7};
    TgLemma l;
    if (tg_verify_lemma27(g, vol, 5, 4, TG_MODEL_ISING, TG_FAMILY_EXPONENTIAL, 8.0, true, 1, 0.3, &l) != TG_STATUS_OK)
        return fail("lemma");
    if (!l.holds) return fail("lemma verdict");
    if (tg_graph_distance(g, 0, 99, &deg) != TG_STATUS_VERTEX_OUT_OF_RANGE || tg_last_error() == NULL)
        return fail("expected out of range");
    tg_graph_free(g);
    double b = 0.0;
    if (tg_beta_star(TG_FAMILY_EXPONENTIAL, 8.0, log(2.0), 1e-12, &b) != TG_STATUS_OK) return fail("beta star");
    printf("%.12f %.6f %s\n", b, t.gamma, tg_version());
    return 0;
}
