#include <stdio.h>
#include "coalloc.h"

int main(void) {
    double maj3[8] = {0, 0, 0, 1, 0, 1, 1, 1};
    CoallocGame *game = NULL;
    CoallocAllocation *shapley = NULL;
    CoallocDecomposition *cert = NULL;
    double phi[3];
    size_t terms = 0, bad = 0;

    if (coalloc_game_new(3, maj3, 8, &game) != COALLOC_STATUS_OK) return 1;
    coalloc_allocation_shapley(3, &shapley);
    coalloc_apply(shapley, game, phi, 3);
    printf("payoffs %.6f %.6f %.6f\n", phi[0], phi[1], phi[2]);

    coalloc_peel_decompose(shapley, 1e-9, &cert);
    coalloc_decomposition_len(cert, &terms);
    coalloc_verify_decomposition(shapley, cert, 1e-9, &bad);
    printf("terms %zu, certificate violations %zu\n", terms, bad);

    if (coalloc_game_new(3, maj3, 7, &game) != COALLOC_STATUS_OK)
        printf("error: %s\n", coalloc_last_error());

    coalloc_decomposition_free(cert);
    coalloc_allocation_free(shapley);
    coalloc_game_free(game);
    return bad == 0 ? 0 : 1;
}
