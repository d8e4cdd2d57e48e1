#include <stdio.h>
#include "wclique.h"

int main(void) {
    const char *text = "p edge 4 5\ne 1 2\ne 1 3\ne 1 4\ne 2 3\ne 2 4\n"
                       "v 1 1\nv 2 1\nv 3 5\nv 4 9\n";
    WcGraph *g = NULL;
    WcConfig *cfg = NULL;
    WcResult *res = NULL;
    if (wc_graph_from_dimacs(text, true, &g) != WC_STATUS_OK) return 1;
    if (wc_config_preset("ref", &cfg) != WC_STATUS_OK) return 2;
    if (wc_solve(g, cfg, 3, 0.0, 500, 0, &res) != WC_STATUS_OK) return 3;
    uint32_t buf[4];
    size_t k = wc_result_clique(res, buf, 4);
    printf("%lld %zu\n", (long long)wc_result_best_weight(res), k);
    if (wc_graph_from_dimacs("q", true, &g) != WC_STATUS_PARSE) return 4;
    printf("%s\n", wc_last_error_message());
    wc_result_free(res);
    wc_config_free(cfg);
    wc_graph_free(g);
    return 0;
}
