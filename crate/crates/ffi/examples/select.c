/* Build: cargo build -p nexcover-ffi --release
 *        cc select.c -I../include ../../../target/release/libnexcover_ffi.a -lpthread -ldl -lm -o select
 */
#include <stdio.h>
#include <stdlib.h>

#include "nexcover.h"

int main(void) {
    NcGraph *g = NULL;
    if (nc_graph_generate(NC_FAMILY_BARABASI_ALBERT, 15, 7, &g) != NC_STATUS_OK) {
        fprintf(stderr, "generate: %s\n", nc_last_error());
        return 1;
    }
    NcSelection *s = NULL;
    if (nc_select_static(g, 0.5, &s) != NC_STATUS_OK) {
        fprintf(stderr, "select: %s\n", nc_last_error());
        nc_graph_free(g);
        return 1;
    }
    size_t k = nc_selection_len(s);
    size_t *ids = malloc(k * sizeof *ids);
    nc_selection_nodes(s, ids, k);
    printf("nexcover %s: %zu of %zu nodes selected:", nc_version(), k, nc_graph_node_count(g));
    for (size_t i = 0; i < k; i++) {
        printf(" %zu", ids[i]);
    }
    printf("\ncost %.6g, lp bound %.6g\n", nc_selection_total_cost(s), nc_selection_objective(s));

    bool covered = false;
    nc_verify_cover(g, ids, k, &covered);
    free(ids);
    nc_selection_free(s);
    nc_graph_free(g);
    return covered ? 0 : 2;
}
