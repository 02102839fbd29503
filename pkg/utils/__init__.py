# Matching plus forest decompositions: graph model, exact search, gadgets, SAT reduction, polynomial solvers
