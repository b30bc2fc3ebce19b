package fixtures;

import static org.junit.Assert.assertTrue;

import org.junit.Test;

public class ReducedPathTest {
    @Test
    public void testUntilTrueDefinitionOnReducedPath() {
        Path p = Path.reduced("a/b/../c");
        assertTrue(p.until("c").isDefined());
    }
}
