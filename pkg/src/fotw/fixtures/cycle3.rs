# directed 3-cycle with a marked vertex
domain a b c
relation E 2
  a b
  b c
  c a
end
relation P 1
  a
end
constant c0 a
