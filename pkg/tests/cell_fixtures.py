"""The eight non-degenerate cells of type (g, m) = (1, 0), shared by tests."""
from parslit.cells import parse_cell_text

SIGMA_TEXT = {
    1: "4 2 : 3,4,1,2,0 ; 1,4,3,2,0 ; 1,2,3,4,0",
    2: "4 2 : 3,4,1,2,0 ; 3,2,1,4,0 ; 1,2,3,4,0",
    3: "4 1 : 3,4,1,2,0 ; 1,2,3,4,0",
    4: "3 2 : 2,3,1,0 ; 1,3,2,0 ; 1,2,3,0",
    5: "3 2 : 2,3,1,0 ; 2,1,3,0 ; 1,2,3,0",
    6: "3 2 : 2,3,1,0 ; 3,2,1,0 ; 1,2,3,0",
    7: "3 1 : 2,3,1,0 ; 1,2,3,0",
    8: "2 2 : 1,2,0 ; 2,1,0 ; 1,2,0",
}

SIGMA = {k: parse_cell_text(text) for k, text in SIGMA_TEXT.items()}
