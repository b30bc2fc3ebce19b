import org.junit.Test;

public class ParserTest {
    @Test
    public void testParseOk() {
        Parser p = new Parser();
        p.feed("a=1");
        assertEquals(1, p.value("a"));
    }

    @Test
    public void testServerGet() {
        Server s = Server.start(8080);
        assertTrue(s.isRunning());
        s.stop();
    }
}
