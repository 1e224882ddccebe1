from lfoc import constructors as C
from lfoc import typecheck as T
from lfoc.corpus import X
from lfoc.terms import neg, pos


def contracted():
    x1, x2 = pos("x1"), pos("x2")
    pair = T.tensor(T.ax(x1, X), T.ax(x2, X))
    c = T.cut(pair, T.ax(neg("a"), C.negate(C.Tensor(X, X))))
    return T.contract(c, (x1, x2), pos("x"))
